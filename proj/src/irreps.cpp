#include "cosetqkd/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cosetqkd/errors.hpp"

namespace cosetqkd::finite {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_abelian(const GroupTable &G, const Subgroup &H) {
    for (int a : H.elems)
        for (int b : H.elems)
            if (G.at(a, b) != G.at(b, a)) return false;
    return true;
}

int position_in(const Subgroup &H, int g) {
    auto it = std::lower_bound(H.elems.begin(), H.elems.end(), g);
    return static_cast<int>(it - H.elems.begin());
}

// Characters of an abelian subgroup, as integer exponents modulo L = lcm of
// element orders: chi(h) = exp(2*pi*i*val[h]/L). Built by choosing greedy
// generators (largest order first), trying every consistent exponent tuple
// for the generators, and propagating through the multiplication table.
std::vector<std::vector<long>> abelian_character_exponents(const GroupTable &G,
                                                           const Subgroup &H,
                                                           long *lcm_out) {
    const int m = H.order();
    std::vector<int> ord(m);
    long L = 1;
    for (int i = 0; i < m; ++i) {
        ord[i] = G.element_order(H.elems[i]);
        L = std::lcm(L, static_cast<long>(ord[i]));
    }
    *lcm_out = L;

    // Greedy generating set: repeatedly add the highest-order element not yet
    // in the closure of the current generators.
    std::vector<int> gens;
    Subgroup closure = subgroup_from_generators(G, {});
    long candidate_count = 1;
    while (closure.order() < m) {
        int best = -1;
        for (int i = 0; i < m; ++i) {
            if (closure.contains(H.elems[i])) continue;
            if (best < 0 || ord[i] > ord[best]) best = i;
        }
        gens.push_back(best);
        candidate_count *= ord[best];
        require_precondition(candidate_count <= 1000000,
                             "irreps: abelian character search too large");
        std::vector<int> raw;
        for (int g : gens) raw.push_back(H.elems[g]);
        closure = subgroup_from_generators(G, raw);
    }

    const int r = static_cast<int>(gens.size());
    std::vector<long> tuple(r, 0);
    std::vector<std::vector<long>> found;
    std::vector<long> val(m);
    std::vector<char> assigned(m);
    while (true) {
        // Propagate exponents from the generator assignment: val[gen_i] =
        // (L/ord_i)*k_i, then val[x*g] = val[x] + val[g] (mod L) by BFS.
        std::fill(assigned.begin(), assigned.end(), 0);
        val[position_in(H, 0)] = 0;
        assigned[position_in(H, 0)] = 1;
        bool consistent = true;
        for (int i = 0; i < r && consistent; ++i) {
            int p = gens[i];
            long v = (L / ord[p]) * tuple[i] % L;
            if (assigned[p] && val[p] != v) consistent = false;
            val[p] = v;
            assigned[p] = 1;
        }
        if (consistent) {
            std::vector<int> frontier;
            for (int i = 0; i < m; ++i)
                if (assigned[i]) frontier.push_back(i);
            while (!frontier.empty() && consistent) {
                std::vector<int> next;
                for (int x : frontier) {
                    for (int gi : gens) {
                        int y = position_in(H, G.at(H.elems[x], H.elems[gi]));
                        long v = (val[x] + val[gi]) % L;
                        if (assigned[y]) {
                            if (val[y] != v) { consistent = false; break; }
                        } else {
                            val[y] = v;
                            assigned[y] = 1;
                            next.push_back(y);
                        }
                    }
                    if (!consistent) break;
                }
                frontier = std::move(next);
            }
        }
        if (consistent) {
            for (int i = 0; i < m && consistent; ++i)
                if (!assigned[i]) consistent = false;
        }
        if (consistent) {
            // Full homomorphism check over the whole table.
            for (int a = 0; a < m && consistent; ++a)
                for (int b = 0; b < m; ++b) {
                    int c = position_in(H, G.at(H.elems[a], H.elems[b]));
                    if ((val[a] + val[b]) % L != val[c]) { consistent = false; break; }
                }
        }
        if (consistent && std::find(found.begin(), found.end(), val) == found.end())
            found.push_back(val);

        int pos = r - 1;
        while (pos >= 0) {
            if (++tuple[pos] < ord[gens[pos]]) break;
            tuple[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    require_precondition(static_cast<int>(found.size()) == m,
                         "irreps: abelian character count mismatch");
    std::sort(found.begin(), found.end());
    return found;
}

IrrepSet abelian_irreps(const GroupTable &G, const Subgroup &H) {
    long L = 1;
    auto exps = abelian_character_exponents(G, H, &L);
    IrrepSet out;
    for (const auto &val : exps) {
        Irrep ir;
        ir.dim = 1;
        ir.mats.reserve(H.order());
        for (int i = 0; i < H.order(); ++i) {
            Eigen::MatrixXcd M(1, 1);
            double ang = 2.0 * kPi * static_cast<double>(val[i]) / static_cast<double>(L);
            M(0, 0) = std::complex<double>(std::cos(ang), std::sin(ang));
            ir.mats.push_back(M);
        }
        out.irreps.push_back(std::move(ir));
    }
    return out;
}

// Dihedral subgroup of order 2p, p odd: rotations R = {h : h^p = e} form the
// unique cyclic subgroup of index 2; everything else is a reflection. Takes
// the lowest-index order-p element as the rotation generator and the
// lowest-index reflection as the flip.
struct DihedralShape {
    int p = 0;
    int s = -1;                // rotation generator (order p)
    int t = -1;                // reflection
    std::vector<int> rot_pow;  // for each position in H: power j with h = s^j, or -1
    std::vector<int> ref_pow;  // for each position in H: j with h = t s^j, or -1
};

bool detect_odd_dihedral(const GroupTable &G, const Subgroup &H, DihedralShape *shape) {
    const int m = H.order();
    if (m % 2 != 0 || m < 6) return false;
    const int p = m / 2;
    if (p % 2 == 0) return false;
    std::vector<int> ords(m);
    for (int i = 0; i < m; ++i) ords[i] = G.element_order(H.elems[i]);
    // Rotations are exactly the elements whose order divides p.
    std::vector<int> rot, refl;
    for (int i = 0; i < m; ++i) {
        if (p % ords[i] == 0)
            rot.push_back(i);
        else if (ords[i] == 2)
            refl.push_back(i);
        else
            return false;
    }
    if (static_cast<int>(rot.size()) != p || static_cast<int>(refl.size()) != p)
        return false;
    int s = -1;
    for (int i : rot)
        if (ords[i] == p) { s = H.elems[i]; break; }
    if (s < 0) return false;
    int t = H.elems[refl.front()];
    // Verify t s t = s^{ -1 } and index the powers.
    if (G.at(G.at(t, s), t) != G.inv[s]) return false;
    shape->p = p;
    shape->s = s;
    shape->t = t;
    shape->rot_pow.assign(m, -1);
    shape->ref_pow.assign(m, -1);
    int x = 0;
    for (int j = 0; j < p; ++j) {
        int pos_r = position_in(H, x);
        int pos_f = position_in(H, G.at(t, x));
        if (pos_r >= m || H.elems[pos_r] != x) return false;
        if (pos_f >= m || H.elems[pos_f] != G.at(t, x)) return false;
        shape->rot_pow[pos_r] = j;
        shape->ref_pow[pos_f] = j;
        x = G.at(x, s);
    }
    return true;
}

IrrepSet dihedral_irreps(const Subgroup &H, const DihedralShape &shape) {
    const int m = H.order();
    const int p = shape.p;
    IrrepSet out;
    auto one_dim = [&](double refl_sign) {
        Irrep ir;
        ir.dim = 1;
        for (int i = 0; i < m; ++i) {
            Eigen::MatrixXcd M(1, 1);
            M(0, 0) = shape.rot_pow[i] >= 0 ? 1.0 : refl_sign;
            ir.mats.push_back(M);
        }
        return ir;
    };
    out.irreps.push_back(one_dim(1.0));
    out.irreps.push_back(one_dim(-1.0));
    for (int k = 1; k <= (p - 1) / 2; ++k) {
        Irrep ir;
        ir.dim = 2;
        for (int i = 0; i < m; ++i) {
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 2);
            auto w = [&](long j) {
                double ang = 2.0 * kPi * k * static_cast<double>(j) / p;
                return std::complex<double>(std::cos(ang), std::sin(ang));
            };
            if (shape.rot_pow[i] >= 0) {
                M(0, 0) = w(shape.rot_pow[i]);
                M(1, 1) = w(-shape.rot_pow[i]);
            } else {
                M(0, 1) = w(-shape.ref_pow[i]);
                M(1, 0) = w(shape.ref_pow[i]);
            }
            ir.mats.push_back(M);
        }
        out.irreps.push_back(std::move(ir));
    }
    return out;
}

}  // namespace

int IrrepSet::sum_dim_sq() const {
    int s = 0;
    for (const auto &ir : irreps) s += ir.dim * ir.dim;
    return s;
}

IrrepSet irreps_of(const GroupTable &G, const Subgroup &H) {
    validate(G, H);
    IrrepSet out;
    if (is_abelian(G, H)) {
        out = abelian_irreps(G, H);
    } else {
        DihedralShape shape;
        if (detect_odd_dihedral(G, H, &shape)) {
            out = dihedral_irreps(H, shape);
        } else {
            throw validation_error(
                "irreps: unsupported subgroup structure (only abelian and "
                "odd-order dihedral subgroups are implemented)");
        }
    }
    require_precondition(out.sum_dim_sq() == H.order(),
                         "irreps: dimension sum check failed");
    return out;
}

void check_schur_orthogonality(const GroupTable &G, const Subgroup &H,
                               const IrrepSet &irr, double tol) {
    (void)G;
    const int m = H.order();
    struct Entry { int irrep, row, col; };
    std::vector<Entry> entries;
    for (int t = 0; t < static_cast<int>(irr.irreps.size()); ++t)
        for (int r = 0; r < irr.irreps[t].dim; ++r)
            for (int c = 0; c < irr.irreps[t].dim; ++c)
                entries.push_back({t, r, c});
    for (size_t a = 0; a < entries.size(); ++a) {
        for (size_t b = a; b < entries.size(); ++b) {
            std::complex<double> acc = 0.0;
            for (int i = 0; i < m; ++i) {
                const auto &Ma = irr.irreps[entries[a].irrep].mats[i];
                const auto &Mb = irr.irreps[entries[b].irrep].mats[i];
                acc += std::conj(Ma(entries[a].row, entries[a].col)) *
                       Mb(entries[b].row, entries[b].col);
            }
            acc /= static_cast<double>(m);
            double expect = (a == b) ? 1.0 / irr.irreps[entries[a].irrep].dim : 0.0;
            require_precondition(std::abs(acc - expect) <= tol,
                                 "irreps: orthogonality check failed");
        }
    }
}

}  // namespace cosetqkd::finite
