#include <doctest.h>

#include <array>
#include <set>

#include "mgkan/errors.hpp"
#include "mgkan/rng.hpp"
#include "mgkan/views.hpp"

#include "oracles.hpp"

using namespace mgkan;

namespace {

DrugGraph random_graph(Index n, double density, Rng& rng) {
    DrugGraph g;
    g.n_drugs = n;
    for (Index u = 0; u < n; ++u) {
        g.drug_ids.push_back("d" + std::to_string(u));
        for (Index v = 0; v < n; ++v)
            if (u != v && uniform(rng) < density) g.edges.emplace_back(u, v);
    }
    return g;
}

} // namespace

TEST_CASE("adjacency from a single edge") {
    DrugGraph g;
    g.n_drugs = 2;
    g.edges = {{0, 1}};
    auto [a_out, a_in] = build_adjacency(g);
    CHECK(a_out.nonZeros() == 1);
    CHECK(a_out.coeff(0, 1) == 1.0);
    CHECK(a_in.nonZeros() == 1);
    CHECK(a_in.coeff(1, 0) == 1.0);
}

TEST_CASE("adjacency of an empty edge set is zero") {
    DrugGraph g;
    g.n_drugs = 4;
    auto [a_out, a_in] = build_adjacency(g);
    CHECK(a_out.nonZeros() == 0);
    CHECK(a_in.nonZeros() == 0);
}

TEST_CASE("A_in equals the transpose on a random graph") {
    Rng rng(31);
    DrugGraph g = random_graph(20, 0.15, rng);
    auto [a_out, a_in] = build_adjacency(g);
    Matrix diff = to_dense(a_in) - to_dense(a_out).transpose();
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("co-interaction of two out-edges from one hub") {
    DrugGraph g;
    g.n_drugs = 3;
    g.edges = {{2, 0}, {2, 1}};
    auto [a_out, a_in] = build_adjacency(g);
    auto [c_in, c_out] = build_co_interaction(a_out);
    // drug 2 interacts with both 0 and 1; its out-degree is 2
    CHECK(c_in.coeff(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c_in.coeff(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c_out.nonZeros() == 0); // nobody shares a target
}

TEST_CASE("no shared neighbors leaves only diagonal mass, which is dropped") {
    DrugGraph g; // a directed chain: no two nodes share an in- or out-neighbor
    g.n_drugs = 4;
    g.edges = {{0, 1}, {1, 2}, {2, 3}};
    auto [a_out, a_in] = build_adjacency(g);
    auto [c_in, c_out] = build_co_interaction(a_out);
    CHECK(c_in.nonZeros() == 0);
    CHECK(c_out.nonZeros() == 0);
}

TEST_CASE("co-interaction matches the triple-loop oracle") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        DrugGraph g = random_graph(30, 0.1, rng);
        auto [a_out, a_in] = build_adjacency(g);
        auto [c_in, c_out] = build_co_interaction(a_out);
        auto [ref_in, ref_out] = oracle::co_interaction_naive(to_dense(a_out));
        CHECK((to_dense(c_in) - ref_in).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((to_dense(c_out) - ref_out).cwiseAbs().maxCoeff() <= 1e-12);

        // Symmetry of both kernels.
        CHECK((to_dense(c_in) - to_dense(c_in).transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((to_dense(c_out) - to_dense(c_out).transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("similarity of identical and disjoint feature vectors") {
    FeatureTable ft(3, {4, 4, 4});
    for (int f = 0; f < 3; ++f) {
        auto fam = static_cast<FeatureFamily>(f);
        ft.set(fam, 0, 0);
        ft.set(fam, 0, 2);
        ft.set(fam, 1, 0);
        ft.set(fam, 1, 2);
        ft.set(fam, 2, 1); // disjoint from drugs 0 and 1
    }
    SpMatrix b = build_similarity(ft);
    CHECK(b.coeff(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(b.coeff(1, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(b.coeff(0, 2) == 0.0);
    CHECK(b.coeff(0, 0) == 0.0); // diagonal zeroed
}

TEST_CASE("jaccard of {1,2} and {2,3} in one family is 1/3") {
    FeatureTable ft(2, {5, 5, 5});
    ft.set(FeatureFamily::Target, 0, 1);
    ft.set(FeatureFamily::Target, 0, 2);
    ft.set(FeatureFamily::Target, 1, 2);
    ft.set(FeatureFamily::Target, 1, 3);
    SpMatrix b = build_similarity(ft);
    CHECK(b.coeff(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ft.jaccard(FeatureFamily::Target, 0, 1) ==
          doctest::Approx(oracle::jaccard_sets({1, 2}, {2, 3})).epsilon(1e-15));
    CHECK(ft.jaccard(FeatureFamily::Enzyme, 0, 1) == 0.0); // both empty
}

TEST_CASE("similarity entries stay within [0, 3] and B is symmetric") {
    Rng rng(41);
    FeatureTable ft(15, {10, 8, 6});
    for (Index d = 0; d < 15; ++d)
        for (int f = 0; f < 3; ++f) {
            auto fam = static_cast<FeatureFamily>(f);
            for (Index i = 0; i < ft.family_dim(fam); ++i)
                if (uniform(rng) < 0.4) ft.set(fam, d, i);
        }
    SpMatrix b = build_similarity(ft);
    Matrix bd = to_dense(b);
    CHECK((bd - bd.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bd.minCoeff() >= 0.0);
    CHECK(bd.maxCoeff() <= 3.0);
}

TEST_CASE("normalize divides by uniform row sums") {
    // Symmetric matrix with all row and column sums equal to 2.
    std::vector<Triplet> trips = {{0, 1, 1.0}, {1, 0, 1.0}, {0, 2, 1.0},
                                  {2, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}};
    SpMatrix m(3, 3);
    m.setFromTriplets(trips.begin(), trips.end());
    SpMatrix norm = normalize(m, 0.0);
    for (int k = 0; k < norm.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(norm, k); it; ++it)
            CHECK(it.value() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalize of a single unit entry is about 1") {
    std::vector<Triplet> trips = {{0, 1, 1.0}};
    SpMatrix m(2, 2);
    m.setFromTriplets(trips.begin(), trips.end());
    SpMatrix norm = normalize(m);
    CHECK(norm.coeff(0, 1) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("normalize matches the dense oracle") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        SpMatrix m(12, 12);
        std::vector<Triplet> trips;
        for (Index r = 0; r < 12; ++r)
            for (Index c = 0; c < 12; ++c)
                if (uniform(rng) < 0.25) trips.emplace_back(r, c, uniform(rng, 0.0, 2.0));
        m.setFromTriplets(trips.begin(), trips.end());
        SpMatrix norm = normalize(m, 1e-8);
        Matrix ref = oracle::dense_normalize(to_dense(m), 1e-8);
        CHECK((to_dense(norm) - ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("normalize rejects negative entries") {
    std::vector<Triplet> trips = {{0, 1, -1.0}};
    SpMatrix m(2, 2);
    m.setFromTriplets(trips.begin(), trips.end());
    CHECK_THROWS_AS(normalize(m), ConfigError);
}

TEST_CASE("normalization never amplifies degree-style matrices") {
    // Entries bounded by row/column sums that are >= 1 when nonzero
    // (adjacency and co-interaction matrices are of this kind): the
    // normalized maxima cannot exceed the input maxima.
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        DrugGraph g = random_graph(15, 0.2, rng);
        auto [a_out, a_in] = build_adjacency(g);
        auto [c_in, c_out] = build_co_interaction(a_out);
        for (const SpMatrix* m : {&a_out, &c_in, &c_out}) {
            if (m->nonZeros() == 0) continue;
            SpMatrix norm = normalize(*m);
            double in_max = 0.0, out_max = 0.0;
            for (int k = 0; k < m->outerSize(); ++k)
                for (SpMatrix::InnerIterator it(*m, k); it; ++it)
                    in_max = std::max(in_max, it.value());
            for (int k = 0; k < norm.outerSize(); ++k)
                for (SpMatrix::InnerIterator it(norm, k); it; ++it)
                    out_max = std::max(out_max, it.value());
            CHECK(out_max <= in_max + 1e-12);
        }
    }
}

TEST_CASE("zero rows and columns survive normalization as zeros") {
    std::vector<Triplet> trips = {{0, 1, 2.0}};
    SpMatrix m(4, 4);
    m.setFromTriplets(trips.begin(), trips.end());
    SpMatrix norm = normalize(m);
    CHECK(norm.nonZeros() == 1);
    for (Index r = 2; r < 4; ++r)
        for (Index c = 0; c < 4; ++c) CHECK(norm.coeff(r, c) == 0.0);
}

TEST_CASE("build_views leakage guard") {
    Rng rng(53);
    DrugGraph full = random_graph(20, 0.15, rng);
    // Hold out a quarter of the edges.
    std::vector<Edge> held(full.edges.begin(), full.edges.begin() + full.edges.size() / 4);
    DrugGraph train = full;
    train.edges.assign(full.edges.begin() + full.edges.size() / 4, full.edges.end());

    ViewSet views = build_views(train, nullptr);
    CHECK_NOTHROW(views.verify_no_leak(held));
    CHECK_THROWS_AS(views.verify_no_leak(train.edges), ConfigError);
    CHECK_FALSE(views.has_similarity);
}

TEST_CASE("symmetrized views collapse the direction") {
    DrugGraph g;
    g.n_drugs = 3;
    g.edges = {{0, 1}, {1, 2}};
    ViewOptions opts;
    opts.symmetrize = true;
    ViewSet v = build_views(g, nullptr, opts);
    Matrix a = to_dense(v.a_out);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((to_dense(v.a_in) - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK((to_dense(v.c_in) - to_dense(v.c_out)).cwiseAbs().maxCoeff() == 0.0);
}
