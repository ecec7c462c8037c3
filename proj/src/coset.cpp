#include "cosetqkd/coset.hpp"

#include <algorithm>
#include <cmath>

#include "cosetqkd/errors.hpp"

namespace cosetqkd::finite {

std::vector<int> coset_reps(const GroupTable &G, const Subgroup &H) {
    std::vector<char> covered(G.order, 0);
    std::vector<int> reps;
    for (int g = 0; g < G.order; ++g) {
        if (covered[g]) continue;
        reps.push_back(g);
        for (int h : H.elems) covered[G.at(g, h)] = 1;
    }
    return reps;
}

CosetBasis coset_basis(const GroupTable &G, const Subgroup &H, const IrrepSet &irr) {
    validate(G, H);
    require_valid(irr.sum_dim_sq() == H.order(), "coset_basis: irrep set incomplete");
    CosetBasis basis;
    basis.reps = coset_reps(G, H);
    basis.U.resize(G.order, G.order);
    int colidx = 0;
    const double scale_base = 1.0 / static_cast<double>(H.order());
    for (int g : basis.reps) {
        for (int t = 0; t < static_cast<int>(irr.irreps.size()); ++t) {
            const Irrep &ir = irr.irreps[t];
            double amp = std::sqrt(ir.dim * scale_base);
            for (int r = 0; r < ir.dim; ++r) {
                for (int c = 0; c < ir.dim; ++c) {
                    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(G.order);
                    for (int i = 0; i < H.order(); ++i)
                        v(G.at(g, H.elems[i])) += amp * ir.mats[i](r, c);
                    basis.U.col(colidx) = v;
                    basis.columns.push_back({g, t, r, c});
                    ++colidx;
                }
            }
        }
    }
    require_precondition(colidx == G.order, "coset_basis: column count mismatch");
    double unitary_err = (basis.U.adjoint() * basis.U -
                          Eigen::MatrixXcd::Identity(G.order, G.order))
                             .cwiseAbs()
                             .maxCoeff();
    require_precondition(unitary_err <= 1e-9, "coset_basis: basis is not unitary");
    return basis;
}

OverlapResult overlap_check(const GroupTable &G, const Subgroup &H, const Subgroup &K,
                            int irrep_index, int row, int col, int q) {
    validate(G, H);
    validate(G, K);
    require_valid(q >= 0 && q < G.order, "overlap_check: q out of range");
    IrrepSet irr = irreps_of(G, H);
    require_valid(irrep_index >= 0 && irrep_index < static_cast<int>(irr.irreps.size()),
                  "overlap_check: irrep index out of range");
    const int d = irr.irreps[irrep_index].dim;
    require_valid(row >= 0 && row < d && col >= 0 && col < d,
                  "overlap_check: matrix-entry index out of range");

    CosetBasis basis = coset_basis(G, H, irr);
    // Collect the chosen entry's column for every coset of H.
    Eigen::MatrixXcd V(G.order, static_cast<int>(basis.reps.size()));
    int nv = 0;
    for (int i = 0; i < G.order; ++i) {
        const ColumnInfo &ci = basis.columns[i];
        if (ci.irrep_index == irrep_index && ci.row == row && ci.col == col)
            V.col(nv++) = basis.U.col(i);
    }
    require_precondition(nv == static_cast<int>(basis.reps.size()),
                         "overlap_check: column collection mismatch");

    // Restrict the projector onto span(V) to the coordinates of the coset qK.
    std::vector<int> coset;
    coset.reserve(K.order());
    for (int k : K.elems) coset.push_back(G.at(q, k));
    Eigen::MatrixXcd Vr(static_cast<int>(coset.size()), nv);
    for (int i = 0; i < static_cast<int>(coset.size()); ++i)
        Vr.row(i) = V.row(coset[i]);
    // ||P Q|| = largest singular value of V^dagger restricted to those rows.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Vr);
    OverlapResult res;
    res.norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    res.bound = std::sqrt(static_cast<double>(d) * intersection_order(H, K) /
                          static_cast<double>(H.order()));
    require_precondition(res.norm <= res.bound + 1e-9,
                         "overlap_check: computed norm exceeds closed-form bound");
    return res;
}

bounds::Bound finite_bound(const GroupTable &G, const std::vector<Subgroup> &S) {
    require_valid(!S.empty(), "finite_bound: subgroup collection is empty");
    for (const auto &H : S) validate(G, H);
    const int n = static_cast<int>(S.size());
    std::vector<int> max_dim(n);
    for (int j = 0; j < n; ++j) {
        IrrepSet irr = irreps_of(G, S[j]);
        int d = 1;
        for (const auto &ir : irr.irreps) d = std::max(d, ir.dim);
        max_dim[j] = d;
    }
    auto perms = bounds::orthogonal_permutations(n);
    double total = 0.0;
    for (const auto &perm : perms) {
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            double term = std::sqrt(static_cast<double>(max_dim[j]) *
                                    intersection_order(S[j], S[perm[j]]) /
                                    static_cast<double>(S[j].order()));
            worst = std::max(worst, term);
        }
        total += std::min(1.0, worst);
    }
    return bounds::make_bound(total / static_cast<double>(perms.size()));
}

}  // namespace cosetqkd::finite
