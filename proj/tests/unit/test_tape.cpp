#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <tuple>

#include "mgkan/adam.hpp"
#include "mgkan/errors.hpp"
#include "mgkan/rng.hpp"
#include "mgkan/tape.hpp"

#include "oracles.hpp"

using namespace mgkan;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng, double lo = -0.9, double hi = 0.9) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, lo, hi);
    return m;
}

SpMatrix random_sparse(Index rows, Index cols, double density, Rng& rng) {
    std::vector<Triplet> trips;
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            if (uniform(rng) < density) trips.emplace_back(r, c, uniform(rng, -1.0, 1.0));
    SpMatrix m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

// Builds the same expression from the same parameters with or without a
// backward pass; drives the finite-difference check per op.
struct OpCheck {
    std::vector<std::unique_ptr<ParamTensor>> store;
    std::vector<ParamTensor*> params;

    ParamTensor* add(const std::string& name, Matrix m) {
        store.push_back(std::make_unique<ParamTensor>(name, std::move(m)));
        params.push_back(store.back().get());
        return store.back().get();
    }

    double run(const std::function<NodeId(Tape&, const std::vector<NodeId>&)>& f, bool bw) {
        Tape t;
        std::vector<NodeId> ids;
        for (ParamTensor* p : params) ids.push_back(t.param(*p));
        NodeId loss = f(t, ids);
        double v = t.scalar(loss);
        if (bw) t.backward(loss);
        return v;
    }

    double fd(const std::function<NodeId(Tape&, const std::vector<NodeId>&)>& f) {
        run(f, true);
        return oracle::max_fd_rel_error(params, [&] { return run(f, false); });
    }
};

// Sum against a fixed random weight matrix so every entry matters.
NodeId weighted_sum(Tape& t, NodeId x, Index rows, Index cols) {
    Matrix w(rows, cols);
    Rng local(7777);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) w(i, j) = uniform(local, -1.0, 1.0);
    return t.reduce_sum(t.mul(x, t.constant(w)));
}

} // namespace

TEST_CASE("spmm identity and zero") {
    Rng rng(5);
    Matrix x = random_matrix(3, 4, rng);
    SpMatrix eye(3, 3);
    eye.setIdentity();
    Tape t;
    NodeId out = t.spmm(eye, t.constant(x));
    CHECK((t.value(out) - x).cwiseAbs().maxCoeff() == 0.0);

    SpMatrix zero(3, 3);
    Tape t2;
    NodeId z = t2.spmm(zero, t2.constant(x));
    CHECK(t2.value(z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spmm matches the dense triple-loop product") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        SpMatrix a = random_sparse(5, 5, 0.3, rng);
        Matrix x = random_matrix(5, 2, rng);
        Tape t;
        NodeId out = t.spmm(a, t.constant(x));
        Matrix ref = oracle::dense_matmul(to_dense(a), x);
        CHECK((t.value(out) - ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
    // Up to 50x50 per the module contract.
    SpMatrix a = random_sparse(50, 50, 0.15, rng);
    Matrix x = random_matrix(50, 7, rng);
    Tape t;
    NodeId out = t.spmm(a, t.constant(x));
    CHECK((t.value(out) - oracle::dense_matmul(to_dense(a), x)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("spmm dimension mismatch") {
    SpMatrix a(3, 3);
    Tape t;
    CHECK_THROWS_AS(t.spmm(a, t.constant(Matrix::Zero(4, 2))), DimensionError);
}

TEST_CASE("backward of a plain sum is all ones; unreachable params get zero") {
    Rng rng(17);
    ParamTensor p("p", random_matrix(3, 2, rng));
    Tape t;
    NodeId loss = t.reduce_sum(t.param(p));
    t.backward(loss);
    CHECK((p.grad - Matrix::Ones(3, 2)).cwiseAbs().maxCoeff() == 0.0);

    ParamTensor q("q", random_matrix(2, 2, rng));
    q.grad.setOnes(); // stale values must be cleared
    Tape t2;
    NodeId lp = t2.param(p);
    (void)t2.param(q);
    t2.backward(t2.reduce_sum(lp));
    CHECK(q.grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward before forward is a usage error") {
    Tape t;
    CHECK_THROWS_AS(t.backward(0), UsageError);
}

TEST_CASE("backward requires a scalar loss") {
    Tape t;
    NodeId x = t.constant(Matrix::Zero(2, 2));
    CHECK_THROWS_AS(t.backward(x), DimensionError);
}

TEST_CASE("per-op gradients match central finite differences") {
    Rng rng(23);
    const double tol = 1e-4;

    SUBCASE("matmul") {
        OpCheck oc;
        oc.add("a", random_matrix(3, 4, rng));
        oc.add("b", random_matrix(4, 2, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.matmul(id[0], id[1]), 3, 2);
              }) <= tol);
    }
    SUBCASE("spmm") {
        OpCheck oc;
        oc.add("x", random_matrix(5, 3, rng));
        SpMatrix a = random_sparse(5, 5, 0.4, rng);
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.spmm(a, id[0]), 5, 3);
              }) <= tol);
    }
    SUBCASE("add and scale") {
        OpCheck oc;
        oc.add("a", random_matrix(3, 3, rng));
        oc.add("b", random_matrix(3, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.add(id[0], t.scale(id[1], -2.5)), 3, 3);
              }) <= tol);
    }
    SUBCASE("mul") {
        OpCheck oc;
        oc.add("a", random_matrix(3, 3, rng));
        oc.add("b", random_matrix(3, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.mul(id[0], id[1]), 3, 3);
              }) <= tol);
    }
    SUBCASE("silu sigmoid tanh") {
        OpCheck oc;
        oc.add("a", random_matrix(4, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.silu(t.sigmoid(t.tanh(id[0]))), 4, 3);
              }) <= tol);
    }
    SUBCASE("softmax_rows") {
        OpCheck oc;
        oc.add("a", random_matrix(4, 5, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.softmax_rows(id[0]), 4, 5);
              }) <= tol);
    }
    SUBCASE("broadcast ops") {
        OpCheck oc;
        oc.add("a", random_matrix(4, 3, rng));
        oc.add("s", random_matrix(1, 1, rng));
        oc.add("c", random_matrix(4, 1, rng));
        oc.add("r", random_matrix(1, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  NodeId x = t.mul_scalar(id[0], id[1]);
                  x = t.cmul_colvec(x, id[2]);
                  x = t.add_rowvec(x, id[3]);
                  return weighted_sum(t, x, 4, 3);
              }) <= tol);
    }
    SUBCASE("shape ops") {
        OpCheck oc;
        oc.add("a", random_matrix(4, 2, rng));
        oc.add("b", random_matrix(4, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  NodeId cat = t.concat_cols(std::array<NodeId, 2>{id[0], id[1]});
                  NodeId g = t.gather_rows(cat, {3, 0, 0, 2});
                  NodeId rep = t.repeat_rows(t.col(g, 1), 2);
                  return weighted_sum(t, t.transpose(rep), 1, 8);
              }) <= tol);
    }
    SUBCASE("reductions") {
        OpCheck oc;
        oc.add("a", random_matrix(4, 3, rng));
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  NodeId rs = weighted_sum(t, t.rowwise_sum(id[0]), 4, 1);
                  NodeId cm = weighted_sum(t, t.colwise_mean(id[0]), 1, 3);
                  return t.add(rs, cm);
              }) <= tol);
    }
    SUBCASE("spline basis") {
        OpCheck oc;
        oc.add("a", random_matrix(5, 3, rng, -0.85, 0.85));
        SplineGrid grid(-1.0, 1.0, 5, 3);
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return weighted_sum(t, t.spline_basis(id[0], grid), 5,
                                      3 * grid.basis_count());
              }) <= tol);
    }
    SUBCASE("sigmoid + bce") {
        OpCheck oc;
        oc.add("a", random_matrix(6, 1, rng, -1.5, 1.5));
        Matrix labels(6, 1);
        labels << 1, 0, 1, 1, 0, 0;
        CHECK(oc.fd([&](Tape& t, const std::vector<NodeId>& id) {
                  return t.bce_loss(t.sigmoid(id[0]), labels);
              }) <= tol);
    }
}

TEST_CASE("bce loss examples") {
    Tape t;
    Matrix half = Matrix::Constant(4, 1, 0.5);
    Matrix y(4, 1);
    y << 1, 0, 1, 0;
    CHECK(t.scalar(t.bce_loss(t.constant(half), y)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Tape t2;
    Matrix exact(2, 1);
    exact << 1.0, 0.0;
    Matrix y2(2, 1);
    y2 << 1, 0;
    CHECK(t2.scalar(t2.bce_loss(t2.constant(exact), y2)) <= 1e-11);

    Tape t3;
    Matrix p(2, 1);
    p << 0.9, 0.2;
    Matrix y3(2, 1);
    y3 << 1, 0;
    double expected = 0.5 * (-std::log(0.9) - std::log(0.8));
    CHECK(t3.scalar(t3.bce_loss(t3.constant(p), y3)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(t3.scalar(t3.bce_loss(t3.constant(p), y3)) == doctest::Approx(0.1643).epsilon(1e-3));

    Tape t4;
    CHECK_THROWS_AS(t4.bce_loss(t4.constant(Matrix(0, 1)), Matrix(0, 1)), UsageError);
}

TEST_CASE("bce loss is strictly lower when the prediction moves toward the label") {
    Matrix y(1, 1);
    y << 1;
    double prev = 1e9;
    for (double p = 0.1; p < 0.95; p += 0.1) {
        Tape t;
        double l = t.scalar(t.bce_loss(t.constant(Matrix::Constant(1, 1, p)), y));
        CHECK(l < prev);
        prev = l;
    }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
    ParamTensor p("p", Matrix::Constant(2, 2, 3.0));
    AdamOptimizer adam;
    std::vector<ParamTensor*> params = {&p};
    p.zero_grad();
    adam.step(params);
    adam.step(params);
    CHECK((p.value - Matrix::Constant(2, 2, 3.0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adam: first step moves by about -lr*sign(g)") {
    AdamConfig cfg;
    cfg.lr = 0.01;
    ParamTensor p("p", Matrix::Zero(1, 2));
    p.grad << 0.37, -2.1;
    AdamOptimizer adam(cfg);
    std::vector<ParamTensor*> params = {&p};
    adam.step(params);
    CHECK(p.value(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(p.value(0, 1) == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(p.grad.cwiseAbs().maxCoeff() == 0.0); // zeroed after the step
}

TEST_CASE("adam: two fixed-gradient steps match the scalar recurrence") {
    AdamConfig cfg;
    cfg.lr = 0.05;
    const double g = 0.8;
    ParamTensor p("p", Matrix::Zero(1, 1));
    AdamOptimizer adam(cfg);
    std::vector<ParamTensor*> params = {&p};

    double m = 0.0, v = 0.0, theta = 0.0;
    for (int t = 1; t <= 2; ++t) {
        p.grad(0, 0) = g;
        adam.step(params);

        m = cfg.beta1 * m + (1 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
        double mh = m / (1 - std::pow(cfg.beta1, t));
        double vh = v / (1 - std::pow(cfg.beta2, t));
        theta -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
        CHECK(p.value(0, 0) == doctest::Approx(theta).epsilon(1e-15));
    }
}

TEST_CASE("determinism: identical seeds give bit-identical values and gradients") {
    auto run = [](std::uint64_t seed) {
        Rng rng(seed);
        ParamTensor a("a", random_matrix(4, 4, rng));
        ParamTensor b("b", random_matrix(4, 4, rng));
        SpMatrix s = random_sparse(4, 4, 0.5, rng);
        Tape t;
        NodeId x = t.matmul(t.param(a), t.silu(t.param(b)));
        NodeId y = t.spmm(s, x);
        NodeId loss = t.reduce_sum(t.mul(y, y));
        double lv = t.scalar(loss);
        t.backward(loss);
        return std::tuple<double, Matrix, Matrix>(lv, a.grad, b.grad);
    };
    auto [l1, ga1, gb1] = run(321);
    auto [l2, ga2, gb2] = run(321);
    CHECK(l1 == l2);
    CHECK((ga1 - ga2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((gb1 - gb2).cwiseAbs().maxCoeff() == 0.0);
}
