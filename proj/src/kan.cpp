#include "mgkan/kan.hpp"

#include "mgkan/errors.hpp"

namespace mgkan {

NodeId kan_transform(Tape& tape, NodeId x, const KanTransform& t, const SplineGrid& grid) {
    require_dims(tape.value(x).cols() == t.d_in, "kan_transform input width");
    if (t.mlp) {
        NodeId lin = tape.matmul(x, tape.param(*t.w));
        return tape.silu(tape.add_rowvec(lin, tape.param(*t.b)));
    }
    const int k = grid.basis_count();
    NodeId base = tape.matmul(tape.silu(x), tape.param(*t.wb));
    NodeId bas = tape.spline_basis(x, grid);
    NodeId ceff = tape.mul(tape.repeat_rows(tape.param(*t.ws), k), tape.param(*t.coeff));
    NodeId spl = tape.matmul(bas, ceff);
    return tape.add(base, spl);
}

NodeId run_stack(Tape& tape, const SpMatrix& propagation, NodeId x, const EncoderStack& stack,
                 const SplineGrid& grid, double input_scale) {
    NodeId h = x;
    for (const GkanLayer& layer : stack.layers) {
        if (input_scale != 1.0) h = tape.scale(h, input_scale);
        NodeId inner = kan_transform(tape, h, layer.inner, grid);
        NodeId agg = tape.spmm(propagation, inner);
        h = kan_transform(tape, agg, layer.outer, grid);
    }
    return h;
}

RoleEmbeddings encode_views(Tape& tape, const ViewSet& views, NodeId x, const EncoderSet& enc,
                            const SplineGrid& grid, const EncodeFlags& flags,
                            double input_scale) {
    const Index n = tape.value(x).rows();
    const Index h = enc.ddi_src.layers.empty()
                        ? 0
                        : enc.ddi_src.layers.back().outer.d_out;
    RoleEmbeddings out{};
    if (flags.no_dn) {
        out.s_n = tape.zeros(n, h);
        out.t_n = tape.zeros(n, h);
    } else {
        out.s_n = run_stack(tape, views.a_out, x, enc.ddi_src, grid, input_scale);
        out.t_n = run_stack(tape, views.a_in, x, enc.ddi_dst, grid, input_scale);
    }
    if (flags.no_ci) {
        out.s_c = tape.zeros(n, h);
        out.t_c = tape.zeros(n, h);
    } else {
        out.s_c = run_stack(tape, views.c_out, x, enc.co_src, grid, input_scale);
        out.t_c = run_stack(tape, views.c_in, x, enc.co_dst, grid, input_scale);
    }
    if (flags.no_sim || !views.has_similarity) {
        out.z_s = tape.zeros(n, h);
    } else {
        out.z_s = run_stack(tape, views.b_sim, x, enc.sim, grid, input_scale);
    }
    return out;
}

} // namespace mgkan
