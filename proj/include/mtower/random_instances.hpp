#pragma once

#include "mtower/bisimplicial.hpp"

#include <random>

namespace mtower {

/// Deterministic instance generation for the randomized suites. Draws use
/// modular arithmetic on the raw engine output, so a fixed seed gives the
/// same instances on every platform.
class InstanceGen {
public:
    explicit InstanceGen(uint64_t seed) : rng_(seed) {}

    uint64_t raw() { return rng_(); }
    long pick(long lo, long hi) { // inclusive
        return lo + long(rng_() % uint64_t(hi - lo + 1));
    }

    ExactMatrix matrix(const RingSpec& rg, int rows, int cols, long mag) {
        ExactMatrix m(rg, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = rg.reduce(mpz_class(pick(-mag, mag)));
        return m;
    }

    /// Bounded complex of free modules with d o d = 0, sampled by drawing
    /// each differential from the kernel lattice of the previous one.
    ChainComplex complex(const RingSpec& rg, int top, int maxrank, long mag) {
        std::vector<int> ranks;
        for (int k = 0; k <= top; ++k) ranks.push_back(int(pick(0, maxrank)));
        std::vector<ExactMatrix> built;
        built.push_back(ExactMatrix(rg, 0, 0));
        for (int k = 1; k <= top; ++k) {
            ExactMatrix prev = (k == 1) ? ExactMatrix(rg, 0, ranks[0]) : built[k - 1];
            ExactMatrix kb = kernel_gens(prev);
            ExactMatrix d(rg, ranks[k - 1], ranks[k]);
            for (int j = 0; j < ranks[k]; ++j) {
                std::vector<mpz_class> col(ranks[k - 1], mpz_class(0));
                for (int t = 0; t < kb.cols(); ++t) {
                    long a = pick(-mag, mag);
                    for (int i = 0; i < ranks[k - 1]; ++i) col[i] += a * kb.at(i, t);
                }
                d.set_column(j, col);
            }
            built.push_back(d);
        }
        return ChainComplex::from_matrices(rg, ranks, built);
    }

    SimplicialModule simplicial(const RingSpec& rg, int level, int top, int maxrank, long mag) {
        return dold_kan(complex(rg, top, maxrank, mag), level);
    }

    /// Externally Moore-fibrant bisimplicial module: internal-chain rows in
    /// positive degrees are sums of identity disks (hence exact), row zero is
    /// arbitrary, and the vertical maps are drawn from the solution lattice
    /// of the commutation and d^2 = 0 constraints.
    BisimplicialModule fibrant_bisimplicial(const RingSpec& rg, int ext_level, int int_level,
                                            int ext_top, int int_top, int maxrank, long mag) {
        // ranks[q][n]: free rank at internal row q, external position n
        std::vector<std::vector<int>> ranks(int_top + 1, std::vector<int>(ext_top + 1, 0));
        std::vector<std::vector<ExactMatrix>> H(int_top + 1); // H[q][n]: row-q horizontal, n >= 1
        // row 0: arbitrary bounded complex
        ChainComplex row0 = complex(rg, ext_top, maxrank, mag);
        for (int n = 0; n <= ext_top; ++n) ranks[0][n] = row0.term(n).generators();
        H[0].assign(ext_top + 1, ExactMatrix(rg, 0, 0));
        for (int n = 1; n <= ext_top; ++n) H[0][n] = row0.differential(n).matrix();
        // rows q >= 1: sums of identity disks at positions (t+1, t)
        for (int q = 1; q <= int_top; ++q) {
            std::vector<int> disk(ext_top, 0);
            for (int t = 0; t < ext_top; ++t) disk[t] = int(pick(0, maxrank));
            for (int n = 0; n <= ext_top; ++n)
                ranks[q][n] = (n < ext_top ? disk[n] : 0) + (n >= 1 ? disk[n - 1] : 0);
            H[q].assign(ext_top + 1, ExactMatrix(rg, 0, 0));
            for (int n = 1; n <= ext_top; ++n) {
                // source layout at n: [disk_n blocks | disk_{n-1} blocks],
                // the second block maps identically onto the first of n-1
                ExactMatrix h(rg, ranks[q][n - 1], ranks[q][n]);
                int src_off = (n < ext_top ? disk[n] : 0);
                for (int a = 0; a < disk[n - 1]; ++a) h.at(a, src_off + a) = 1;
                H[q][n] = h;
            }
        }
        // vertical maps V[q][n]: row q pos n -> row q-1 pos n
        std::vector<std::vector<ExactMatrix>> V(int_top + 1);
        V[0].assign(ext_top + 1, ExactMatrix(rg, 0, 0));
        for (int q = 1; q <= int_top; ++q) {
            // unknowns: entries of V[q][0..ext_top]
            std::vector<int> offs;
            int total = 0;
            for (int n = 0; n <= ext_top; ++n) {
                offs.push_back(total);
                total += ranks[q - 1][n] * ranks[q][n];
            }
            // constraint rows
            std::vector<std::vector<mpz_class>> rows_;
            auto add_rows = [&](int count) {
                for (int r = 0; r < count; ++r) rows_.emplace_back(total, mpz_class(0));
                return int(rows_.size()) - count;
            };
            auto entry_index = [&](int n, int r, int c) { return offs[n] + c * ranks[q - 1][n] + r; };
            // commutation: V[n-1] H_q[n] = H_{q-1}[n] V[n]
            for (int n = 1; n <= ext_top; ++n) {
                int R = ranks[q - 1][n - 1], C = ranks[q][n];
                int base = add_rows(R * C);
                for (int a = 0; a < R; ++a)
                    for (int b = 0; b < C; ++b) {
                        int row = base + a * C + b;
                        for (int t = 0; t < ranks[q][n - 1]; ++t)
                            rows_[row][entry_index(n - 1, a, t)] += H[q][n].at(t, b);
                        for (int t = 0; t < ranks[q - 1][n]; ++t)
                            rows_[row][entry_index(n, t, b)] -= H[q - 1][n].at(a, t);
                    }
            }
            // square zero: V[q-1][n] V[q][n] = 0
            if (q >= 2)
                for (int n = 0; n <= ext_top; ++n) {
                    int R = ranks[q - 2][n], C = ranks[q][n];
                    int base = add_rows(R * C);
                    for (int a = 0; a < R; ++a)
                        for (int b = 0; b < C; ++b) {
                            int row = base + a * C + b;
                            for (int t = 0; t < ranks[q - 1][n]; ++t)
                                rows_[row][entry_index(n, t, b)] += V[q - 1][n].at(a, t);
                        }
                }
            ExactMatrix sys(rg, int(rows_.size()), total);
            for (int r = 0; r < int(rows_.size()); ++r)
                for (int c = 0; c < total; ++c) sys.at(r, c) = rg.reduce(rows_[r][c]);
            ExactMatrix kb = kernel_gens(sys);
            std::vector<mpz_class> vvec(total, mpz_class(0));
            for (int t = 0; t < kb.cols(); ++t) {
                long a = pick(-1, 1);
                for (int c = 0; c < total; ++c) vvec[c] += a * kb.at(c, t);
            }
            V[q].clear();
            for (int n = 0; n <= ext_top; ++n) {
                ExactMatrix v(rg, ranks[q - 1][n], ranks[q][n]);
                for (int cc = 0; cc < ranks[q][n]; ++cc)
                    for (int rr = 0; rr < ranks[q - 1][n]; ++rr)
                        v.at(rr, cc) = rg.reduce(vvec[entry_index(n, rr, cc)]);
                V[q].push_back(v);
            }
        }
        // assemble the double complex: columns at external n
        DoubleComplex D;
        for (int n = 0; n <= ext_top; ++n) {
            std::vector<int> cranks;
            std::vector<ExactMatrix> cmats(1, ExactMatrix(rg, 0, 0));
            for (int q = 0; q <= int_top; ++q) cranks.push_back(ranks[q][n]);
            for (int q = 1; q <= int_top; ++q) cmats.push_back(V[q][n]);
            D.columns.push_back(ChainComplex::from_matrices(rg, cranks, cmats));
        }
        for (int n = 1; n <= ext_top; ++n) {
            std::vector<ModuleMap> comps;
            for (int q = 0; q <= int_top; ++q)
                comps.emplace_back(D.columns[n].term(q), D.columns[n - 1].term(q), H[q][n], false);
            D.horizontal.push_back(ChainMap(D.columns[n], D.columns[n - 1], comps));
        }
        D.horizontal.insert(D.horizontal.begin(), ChainMap());
        D.validate();
        return bisimplicial_from_double(D, ext_level, int_level);
    }

private:
    std::mt19937_64 rng_;
};

} // namespace mtower
