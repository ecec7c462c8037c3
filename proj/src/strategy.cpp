#include "cosetqkd/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cosetqkd/errors.hpp"
#include "cosetqkd/rng.hpp"

namespace cosetqkd::finite {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr int kStrategyDimCap = 2048;

struct GameTables {
    std::vector<CosetBasis> bases;   // one per subgroup
    std::vector<int> n_cosets;       // outcomes for the coset guesser
    std::vector<int> n_entries;      // outcomes for the entry guesser (= |H|)
};

GameTables build_tables(const GroupTable &G, const std::vector<Subgroup> &S) {
    GameTables t;
    for (const auto &H : S) {
        IrrepSet irr = irreps_of(G, H);
        t.bases.push_back(coset_basis(G, H, irr));
        t.n_cosets.push_back(G.order / H.order());
        t.n_entries.push_back(H.order());
    }
    return t;
}

void validate_povm(const std::vector<MatrixXcd> &povm, int dim, const char *who) {
    MatrixXcd sum = MatrixXcd::Zero(dim, dim);
    for (const auto &E : povm) {
        require_valid(E.rows() == dim && E.cols() == dim,
                      std::string(who) + ": element dimension mismatch");
        require_valid((E - E.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                      std::string(who) + ": element not hermitian");
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(E, Eigen::EigenvaluesOnly);
        require_valid(es.eigenvalues().minCoeff() >= -1e-10,
                      std::string(who) + ": element not positive");
        sum += E;
    }
    require_valid((sum - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10,
                  std::string(who) + ": elements do not sum to identity");
}

}  // namespace

double strategy_value(const GroupTable &G, const std::vector<Subgroup> &S,
                      const FiniteStrategy &strat) {
    require_valid(!S.empty(), "strategy_value: subgroup collection is empty");
    for (const auto &H : S) validate(G, H);
    const int dB = strat.d_B, dC = strat.d_C;
    require_valid(dB >= 1 && dC >= 1, "strategy_value: ancilla dimensions must be >= 1");
    const long D = static_cast<long>(G.order) * dB * dC;
    if (D > kStrategyDimCap)
        throw resource_error("strategy_value: total dimension exceeds cap");
    require_valid(strat.rho.rows() == D && strat.rho.cols() == D,
                  "strategy_value: state dimension mismatch");
    require_valid((strat.rho - strat.rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                  "strategy_value: state not hermitian");
    require_valid(std::abs(strat.rho.trace().real() - 1.0) <= 1e-10 &&
                      std::abs(strat.rho.trace().imag()) <= 1e-10,
                  "strategy_value: state trace is not 1");
    {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(strat.rho, Eigen::EigenvaluesOnly);
        require_valid(es.eigenvalues().minCoeff() >= -1e-10,
                      "strategy_value: state not positive");
    }
    GameTables tables = build_tables(G, S);
    require_valid(strat.bob.size() == S.size() && strat.charlie.size() == S.size(),
                  "strategy_value: need one measurement per subgroup");
    for (size_t i = 0; i < S.size(); ++i) {
        require_valid(static_cast<int>(strat.bob[i].size()) == tables.n_cosets[i],
                      "strategy_value: coset outcome count mismatch");
        require_valid(static_cast<int>(strat.charlie[i].size()) == tables.n_entries[i],
                      "strategy_value: entry outcome count mismatch");
        validate_povm(strat.bob[i], dB, "strategy_value coset POVM");
        validate_povm(strat.charlie[i], dC, "strategy_value entry POVM");
    }

    const int dd = dB * dC;
    double total = 0.0;
    MatrixXcd Z(dd, dd);
    for (size_t i = 0; i < S.size(); ++i) {
        const CosetBasis &basis = tables.bases[i];
        const int per_coset = tables.n_entries[i];
        for (int j = 0; j < G.order; ++j) {
            const VectorXcd v = basis.U.col(j);
            const int a = j / per_coset;   // coset outcome
            const int cc = j % per_coset;  // entry outcome
            // Z = (v (x) I)^dagger rho (v (x) I)
            Z.setZero();
            for (int x = 0; x < G.order; ++x) {
                if (std::norm(v(x)) < 1e-30) continue;
                for (int xp = 0; xp < G.order; ++xp) {
                    std::complex<double> w = std::conj(v(xp)) * v(x);
                    if (std::norm(w) < 1e-60) continue;
                    Z.noalias() += w * strat.rho.block(xp * dd, x * dd, dd, dd);
                }
            }
            // contribution = sum_{b,b',c,c'} B[b,b'] C[c,c'] Z[(b'c'),(bc)]
            const MatrixXcd &B = strat.bob[i][a];
            const MatrixXcd &C = strat.charlie[i][cc];
            std::complex<double> contrib = 0.0;
            for (int b = 0; b < dB; ++b)
                for (int bp = 0; bp < dB; ++bp) {
                    std::complex<double> inner = 0.0;
                    for (int c = 0; c < dC; ++c)
                        for (int cp = 0; cp < dC; ++cp)
                            inner += C(c, cp) * Z(bp * dC + cp, b * dC + c);
                    contrib += B(b, bp) * inner;
                }
            total += contrib.real();
        }
    }
    return total / static_cast<double>(S.size());
}

namespace {

// Pure-state internals for the alternating optimization. psi lives on
// A (x) B (x) C with flat index (x*dB + b)*dC + c.
struct SeesawState {
    VectorXcd psi;
    std::vector<std::vector<MatrixXcd>> bob;
    std::vector<std::vector<MatrixXcd>> charlie;
};

// zeta[b][c] = sum_x conj(v(x)) psi[(x,b,c)], reshaped to dB x dC.
MatrixXcd project_column(const VectorXcd &v, const VectorXcd &psi, int nG, int dB,
                         int dC) {
    const int dd = dB * dC;
    VectorXcd z = VectorXcd::Zero(dd);
    for (int x = 0; x < nG; ++x) {
        if (std::norm(v(x)) < 1e-30) continue;
        z.noalias() += std::conj(v(x)) * psi.segment(x * dd, dd);
    }
    return Eigen::Map<const MatrixXcd>(z.data(), dC, dB).transpose();
}

// Square-root measurement over the positive operator family T, completed on
// the orthogonal complement of the family's joint support.
// Regularized square-root measurement.  A hard spectral cutoff on S would
// amplify rounding by 1/lambda_min and wreck POVM completeness, so instead:
//   - S is shifted by a small ridge before the inverse square root, keeping
//     the amplification of float noise bounded;
//   - each element is formed as F F* with F = (S+ridge)^{-1/2} T^{1/2}, which
//     is positive semidefinite by construction;
//   - the exact deficit I - sum_a F_a F_a* (positive up to dust, since the
//     ridge leaves slack ridge/(lambda_max+ridge)) is spread uniformly across
//     the outcomes, so the elements sum to the identity up to plain addition
//     rounding.
std::vector<MatrixXcd> square_root_measurement(std::vector<MatrixXcd> T) {
    const int n = static_cast<int>(T.size());
    const int dim = static_cast<int>(T[0].rows());
    MatrixXcd Ssum = MatrixXcd::Zero(dim, dim);
    for (auto &t : T) {
        t = ((t + t.adjoint()) / 2.0).eval();
        Ssum += t;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Ssum);
    const auto &vals = es.eigenvalues();
    const auto &vecs = es.eigenvectors();
    double ridge = std::max(vals.maxCoeff(), 1e-30) * 1e-8;
    MatrixXcd inv_sqrt = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        double lam = std::max(vals(i), 0.0) + ridge;
        inv_sqrt += vecs.col(i) * vecs.col(i).adjoint() / std::sqrt(lam);
    }
    std::vector<MatrixXcd> out;
    out.reserve(n);
    MatrixXcd total = MatrixXcd::Zero(dim, dim);
    for (const auto &t : T) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> et(t);
        MatrixXcd root = MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) {
            double lam = std::max(et.eigenvalues()(i), 0.0);
            root += et.eigenvectors().col(i) * et.eigenvectors().col(i).adjoint() *
                    std::sqrt(lam);
        }
        MatrixXcd F = inv_sqrt * root;
        MatrixXcd E = F * F.adjoint();
        total += E;
        out.push_back(std::move(E));
    }
    MatrixXcd rest = (MatrixXcd::Identity(dim, dim) - total) / static_cast<double>(n);
    rest = ((rest + rest.adjoint()) / 2.0).eval();
    for (auto &E : out) E += rest;
    return out;
}

std::vector<MatrixXcd> uniform_povm(int dim, int outcomes) {
    return std::vector<MatrixXcd>(
        outcomes, MatrixXcd::Identity(dim, dim) / static_cast<double>(outcomes));
}

}  // namespace

SeesawResult seesaw_lower_bound(const GroupTable &G, const std::vector<Subgroup> &S,
                                const SeesawOptions &opts) {
    require_valid(!S.empty(), "seesaw: subgroup collection is empty");
    for (const auto &H : S) validate(G, H);
    require_valid(opts.iterations >= 1, "seesaw: iteration count must be >= 1");
    const int dB = opts.d_B > 0 ? opts.d_B : G.order;
    const int dC = opts.d_C > 0 ? opts.d_C : G.order;
    const long D = static_cast<long>(G.order) * dB * dC;
    if (D > kStrategyDimCap)
        throw resource_error(
            "seesaw: total dimension exceeds cap; reduce the ancilla dimensions");
    const int dd = dB * dC;
    const int nS = static_cast<int>(S.size());
    GameTables tables = build_tables(G, S);

    SeesawState st;
    Rng rng(derive_seed(opts.seed, 0x5e, 0));
    st.psi.resize(D);
    for (long i = 0; i < D; ++i)
        st.psi(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
    st.psi.normalize();
    st.bob.resize(nS);
    st.charlie.resize(nS);
    for (int i = 0; i < nS; ++i) {
        st.bob[i] = uniform_povm(dB, tables.n_cosets[i]);
        st.charlie[i] = uniform_povm(dC, tables.n_entries[i]);
    }

    // Winning probability of the current pure-state strategy.
    auto current_value = [&]() {
        double total = 0.0;
        for (int i = 0; i < nS; ++i) {
            const int per = tables.n_entries[i];
            for (int j = 0; j < G.order; ++j) {
                MatrixXcd zeta =
                    project_column(tables.bases[i].U.col(j), st.psi, G.order, dB, dC);
                const MatrixXcd &B = st.bob[i][j / per];
                const MatrixXcd &C = st.charlie[i][j % per];
                // <z|(B (x) C)|z> with zeta the dB x dC reshaping of z
                total += (zeta.adjoint() * B * zeta * C.transpose()).trace().real();
            }
        }
        return total / nS;
    };

    double best_value = -1.0;
    SeesawState best = st;
    bool converged = false;
    int rounds = 0;
    double prev_value = -1.0;

    for (int iter = 0; iter < opts.iterations; ++iter) {
        rounds = iter + 1;
        // Measurement updates from the current state.
        for (int i = 0; i < nS; ++i) {
            const int per = tables.n_entries[i];
            std::vector<MatrixXcd> zetas(G.order);
            for (int j = 0; j < G.order; ++j)
                zetas[j] =
                    project_column(tables.bases[i].U.col(j), st.psi, G.order, dB, dC);

            std::vector<MatrixXcd> TB(tables.n_cosets[i], MatrixXcd::Zero(dB, dB));
            for (int j = 0; j < G.order; ++j) {
                const MatrixXcd &C = st.charlie[i][j % per];
                // T[b',b] = sum_{c,c'} C[c,c'] zeta[b'][c'] conj(zeta[b][c])
                TB[j / per].noalias() +=
                    zetas[j] * (zetas[j] * C.conjugate()).adjoint();
            }
            st.bob[i] = square_root_measurement(std::move(TB));

            std::vector<MatrixXcd> TC(per, MatrixXcd::Zero(dC, dC));
            for (int j = 0; j < G.order; ++j) {
                const MatrixXcd &B = st.bob[i][j / per];
                // U[c',c] = sum_{b,b'} B[b,b'] zeta[b'][c'] conj(zeta[b][c])
                TC[j % per].noalias() +=
                    zetas[j].transpose() * (B.adjoint() * zetas[j]).conjugate();
            }
            st.charlie[i] = square_root_measurement(std::move(TC));
        }

        // State update: leading eigenvector of the game operator for the new
        // measurements, found by power iteration (the operator is positive).
        auto apply_game_op = [&](const VectorXcd &in) {
            VectorXcd out = VectorXcd::Zero(D);
            for (int i = 0; i < nS; ++i) {
                const int per = tables.n_entries[i];
                for (int j = 0; j < G.order; ++j) {
                    const VectorXcd &v = tables.bases[i].U.col(j);
                    MatrixXcd zeta = project_column(v, in, G.order, dB, dC);
                    MatrixXcd mapped = (st.bob[i][j / per] * zeta *
                                        st.charlie[i][j % per].transpose())
                                           .transpose();
                    Eigen::Map<const VectorXcd> seg(mapped.data(), dd);
                    for (int x = 0; x < G.order; ++x) {
                        if (std::norm(v(x)) < 1e-30) continue;
                        out.segment(static_cast<long>(x) * dd, dd).noalias() +=
                            v(x) * seg;
                    }
                }
            }
            return (out / nS).eval();
        };
        double rayleigh = -1.0;
        for (int step = 0; step < 300; ++step) {
            VectorXcd w = apply_game_op(st.psi);
            double r = st.psi.dot(w).real();
            double norm = w.norm();
            if (norm < 1e-300) {
                for (long ii = 0; ii < D; ++ii)
                    w(ii) = std::complex<double>(rng.gaussian(), rng.gaussian());
                norm = w.norm();
            }
            st.psi = w / norm;
            if (step > 0 && std::abs(r - rayleigh) < 1e-13) break;
            rayleigh = r;
        }

        double value = current_value();
        if (value > best_value) {
            best_value = value;
            best = st;
        }
        if (prev_value >= 0.0 && std::abs(value - prev_value) < opts.tolerance) {
            converged = true;
            break;
        }
        prev_value = value;
    }

    // A strategy that ignores everything and guesses uniformly wins with
    // probability exactly 1/|G|; never return less.
    if (best_value < 1.0 / G.order) {
        for (int i = 0; i < nS; ++i) {
            best.bob[i] = uniform_povm(dB, tables.n_cosets[i]);
            best.charlie[i] = uniform_povm(dC, tables.n_entries[i]);
        }
    }

    SeesawResult result;
    result.strategy.d_B = dB;
    result.strategy.d_C = dC;
    result.strategy.rho = best.psi * best.psi.adjoint();
    result.strategy.bob = best.bob;
    result.strategy.charlie = best.charlie;
    result.converged = converged;
    result.iterations_run = rounds;
    result.value = strategy_value(G, S, result.strategy);
    return result;
}

}  // namespace cosetqkd::finite
