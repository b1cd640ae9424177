#pragma once

#include "mtower/chain.hpp"

#include <map>

namespace mtower {

/// Truncated simplicial module: levels 0..N with faces d_i : X_n -> X_{n-1}
/// and degeneracies s_j : X_n -> X_{n+1}. All simplicial identities are
/// verified exactly at construction.
class SimplicialModule {
public:
    SimplicialModule() : ring_(RingSpec::integers()), level_(-1) {}

    SimplicialModule(RingSpec ring, std::vector<FgModule> levels,
                     std::vector<std::vector<ModuleMap>> faces,
                     std::vector<std::vector<ModuleMap>> degens, bool verify = true)
        : ring_(std::move(ring)), level_(int(levels.size()) - 1), levels_(std::move(levels)),
          faces_(std::move(faces)), degens_(std::move(degens)) {
        if (verify) validate();
    }

    static SimplicialModule constant(const FgModule& m, int level) {
        std::vector<FgModule> levels(level + 1, m);
        std::vector<std::vector<ModuleMap>> faces(level + 1), degens(level + 1);
        for (int n = 1; n <= level; ++n) faces[n].assign(n + 1, ModuleMap::identity(m));
        for (int n = 0; n < level; ++n) degens[n].assign(n + 1, ModuleMap::identity(m));
        return SimplicialModule(m.ring(), std::move(levels), std::move(faces), std::move(degens), false);
    }

    const RingSpec& ring() const { return ring_; }
    int truncation_level() const { return level_; }
    const FgModule& level(int n) const {
        if (n < 0 || n > level_) throw ring_error("simplicial level out of range: " + std::to_string(n));
        return levels_[n];
    }
    ModuleMap face(int n, int i) const {
        if (n < 1 || n > level_ || i < 0 || i > n)
            throw ring_error("face index out of range");
        return faces_[n][i];
    }
    ModuleMap degeneracy(int n, int j) const {
        if (n < 0 || n >= level_ || j < 0 || j > n)
            throw ring_error("degeneracy index out of range");
        return degens_[n][j];
    }

    void validate() const {
        for (int n = 1; n <= level_; ++n)
            if (int(faces_[n].size()) != n + 1)
                throw ring_error("face count wrong at level " + std::to_string(n));
        for (int n = 0; n < level_; ++n)
            if (int(degens_[n].size()) != n + 1)
                throw ring_error("degeneracy count wrong at level " + std::to_string(n));
        // d_i d_j = d_{j-1} d_i, i < j
        for (int n = 2; n <= level_; ++n)
            for (int j = 1; j <= n; ++j)
                for (int i = 0; i < j; ++i) {
                    ModuleMap lhs = face(n - 1, i).compose(face(n, j));
                    ModuleMap rhs = face(n - 1, j - 1).compose(face(n, i));
                    if (!lhs.equal_map(rhs))
                        throw ring_error("simplicial identity d_i d_j fails at (level " + std::to_string(n) +
                                         ", i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                }
        // d_i s_j
        for (int n = 0; n < level_; ++n)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n + 1; ++i) {
                    ModuleMap lhs = face(n + 1, i).compose(degeneracy(n, j));
                    ModuleMap rhs = ModuleMap::identity(level(n));
                    if (i < j)
                        rhs = degeneracy(n - 1, j - 1).compose(face(n, i));
                    else if (i == j || i == j + 1)
                        rhs = ModuleMap::identity(level(n));
                    else
                        rhs = degeneracy(n - 1, j).compose(face(n, i - 1));
                    if (!lhs.equal_map(rhs))
                        throw ring_error("simplicial identity d_i s_j fails at (level " + std::to_string(n) +
                                         ", i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                }
        // s_i s_j = s_{j+1} s_i, i <= j
        for (int n = 0; n + 1 < level_; ++n)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= j; ++i) {
                    ModuleMap lhs = degeneracy(n + 1, i).compose(degeneracy(n, j));
                    ModuleMap rhs = degeneracy(n + 1, j + 1).compose(degeneracy(n, i));
                    if (!lhs.equal_map(rhs))
                        throw ring_error("simplicial identity s_i s_j fails at (level " + std::to_string(n) +
                                         ", i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                }
    }

private:
    RingSpec ring_;
    int level_;
    std::vector<FgModule> levels_;
    std::vector<std::vector<ModuleMap>> faces_;
    std::vector<std::vector<ModuleMap>> degens_;
};

/// Levelwise map of simplicial modules commuting with all structure maps.
struct SimplicialMap {
    SimplicialModule source, target;
    std::vector<ModuleMap> comps;

    void validate() const {
        int n = std::min(source.truncation_level(), target.truncation_level());
        for (int k = 1; k <= n; ++k)
            for (int i = 0; i <= k; ++i)
                if (!target.face(k, i).compose(comps[k]).equal_map(comps[k - 1].compose(source.face(k, i))))
                    throw ring_error("SimplicialMap: face square fails");
        for (int k = 0; k < n; ++k)
            for (int j = 0; j <= k; ++j)
                if (!target.degeneracy(k, j).compose(comps[k]).equal_map(comps[k + 1].compose(source.degeneracy(k, j))))
                    throw ring_error("SimplicialMap: degeneracy square fails");
    }
};

struct MatchingObject {
    FgModule object;
    ModuleMap delta;           // X_n -> object
    ModuleMap inclusion;       // object -> (X_{n-1})^{n+1}
    DirectSum product;
};

namespace detail {

/// The matching object only needs levels <= n-1, so it is defined one step
/// above the truncation; no delta is available there.
inline MatchingObject matching_object_data(const SimplicialModule& x, int n) {
    const RingSpec& rg = x.ring();
    if (n - 1 > x.truncation_level()) throw ring_error("matching_object: degree above truncation");
    if (n == 0) {
        FgModule zero = FgModule::zero(rg);
        return {zero, ModuleMap::zero(x.level(0), zero), ModuleMap::identity(zero), direct_sum({}, rg)};
    }
    const FgModule& below = x.level(n - 1);
    std::vector<FgModule> copies(n + 1, below);
    DirectSum prod = direct_sum(copies, rg);

    std::vector<ModuleMap> conditions;
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i) {
            if (n - 1 < 1) continue; // no faces below level 0
            ModuleMap cond = x.face(n - 1, i).compose(prod.project[j]) - x.face(n - 1, j - 1).compose(prod.project[i]);
            conditions.push_back(cond);
        }
    KernelData kd = joint_kernel(prod.total, conditions);
    MatchingObject out;
    out.object = kd.module;
    out.inclusion = kd.inclusion;
    out.product = prod;
    return out;
}

} // namespace detail

/// M_n X = tuples (x_0..x_n) in (X_{n-1})^{n+1} with d_i x_j = d_{j-1} x_i
/// for 0 <= i < j <= n; at n = 1 the condition set is empty, so M_1 = X_0^2.
/// Every face map factors through delta.
inline MatchingObject matching_object(const SimplicialModule& x, int n) {
    if (n > x.truncation_level()) throw ring_error("matching_object: degree above truncation");
    MatchingObject out = detail::matching_object_data(x, n);
    if (n == 0) return out;
    ModuleMap stacked = ModuleMap::zero(x.level(n), out.product.total);
    for (int i = 0; i <= n; ++i) stacked = stacked + out.product.inject[i].compose(x.face(n, i));
    out.delta = corestrict(out.inclusion, stacked);
    return out;
}

struct LatchingObject {
    FgModule object;
    ModuleMap sigma; // object -> X_n
};

/// L_n X: n copies of X_{n-1} glued along the degeneracy overlaps
/// s_j x (copy i) ~ s_i x (copy j+1) for 0 <= i <= j <= n-2, presented as an
/// explicit coequalizer quotient; sigma sends copy i through s_i.
inline LatchingObject latching_object(const SimplicialModule& x, int n) {
    const RingSpec& rg = x.ring();
    if (n > x.truncation_level()) throw ring_error("latching_object: degree above truncation");
    if (n == 0) {
        FgModule zero = FgModule::zero(rg);
        return {zero, ModuleMap::zero(zero, x.level(0))};
    }
    const FgModule& below = x.level(n - 1);
    int g = below.generators();
    int total_gens = n * g;
    // block-diagonal relations of the copies
    ExactMatrix rel(rg, total_gens, 0);
    {
        ExactMatrix blocks(rg, 0, 0);
        for (int i = 0; i < n; ++i) blocks = ExactMatrix::block_diag(blocks, below.relations());
        rel = blocks;
    }
    // identification columns from the elementary degeneracy identities
    if (n >= 2) {
        const FgModule& lower = x.level(n - 2);
        for (int j = 0; j <= n - 2; ++j)
            for (int i = 0; i <= j; ++i) {
                const ExactMatrix sj = x.degeneracy(n - 2, j).matrix();
                const ExactMatrix si = x.degeneracy(n - 2, i).matrix();
                for (int t = 0; t < lower.generators(); ++t) {
                    ExactMatrix col(rg, total_gens, 1);
                    for (int r = 0; r < g; ++r) {
                        col.at(i * g + r, 0) = sj.at(r, t);
                        col.at((j + 1) * g + r, 0) = rg.reduce(col.at((j + 1) * g + r, 0) - si.at(r, t));
                    }
                    rel = ExactMatrix::hcat(rel, col);
                }
            }
    }
    FgModule L(rg, total_gens, rel);
    ExactMatrix sig(rg, x.level(n).generators(), total_gens);
    for (int i = 0; i < n; ++i) {
        const ExactMatrix si = x.degeneracy(n - 1, i).matrix();
        for (int r = 0; r < si.rows(); ++r)
            for (int c = 0; c < g; ++c) sig.at(r, i * g + c) = si.at(r, c);
    }
    return {L, ModuleMap(L, x.level(n), sig)};
}

struct MooreComplex {
    std::vector<KernelData> chains; // C_n = cap ker d_i, i >= 1
    std::vector<KernelData> cycles; // Z_n = cap ker d_i, i >= 0
    ChainComplex normalized;        // terms C_n, differential d_0
};

inline MooreComplex moore_complex(const SimplicialModule& x) {
    const RingSpec& rg = x.ring();
    int N = x.truncation_level();
    MooreComplex out;
    for (int n = 0; n <= N; ++n) {
        std::vector<ModuleMap> pos, all;
        for (int i = 1; i <= n; ++i) pos.push_back(x.face(n, i));
        for (int i = 0; i <= n; ++i)
            if (n >= 1) all.push_back(x.face(n, i));
        out.chains.push_back(joint_kernel(x.level(n), pos));
        out.cycles.push_back(joint_kernel(x.level(n), all));
    }
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    for (int n = 0; n <= N; ++n) {
        terms.push_back(out.chains[n].module);
        if (n == 0)
            diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(rg)));
        else
            diffs.push_back(corestrict(out.chains[n - 1].inclusion,
                                       x.face(n, 0).compose(out.chains[n].inclusion)));
    }
    out.normalized = ChainComplex(rg, std::move(terms), std::move(diffs), false);
    return out;
}

/// pi_n = H_n of the normalized complex; requires one level of slack so the
/// boundaries from level n+1 are present.
inline FgModule homotopy_groups(const SimplicialModule& x, int n) {
    if (n < 0) return FgModule::zero(x.ring());
    if (n + 1 > x.truncation_level())
        throw ring_error("homotopy_groups: insufficient truncation for degree " + std::to_string(n));
    return homology(moore_complex(x).normalized, n);
}

namespace detail {

/// Monotone surjections [n] ->> [k] as value lists (steps 0 or +1, starting
/// at 0 and ending at k), in lexicographic order.
inline std::vector<std::vector<int>> surjections(int n, int k) {
    std::vector<std::vector<int>> out;
    if (n < 0 || k < 0 || k > n) return out;
    std::vector<int> cur(n + 1);
    cur[0] = 0;
    std::function<void(int, int)> go = [&](int pos, int val) {
        if (pos == n + 1) {
            if (val == k) out.push_back(cur);
            return;
        }
        cur[pos] = val;
        go(pos + 1, val);
        if (val + 1 <= k) {
            cur[pos] = val + 1;
            go(pos + 1, val + 1);
        }
    };
    if (n == 0) {
        if (k == 0) out.push_back(cur);
    } else {
        go(1, 0);
    }
    return out;
}

} // namespace detail

/// Dold-Kan functor: level n is the sum over surjections [n] ->> [k] of
/// copies of c_k; normalization recovers c on the nose.
inline SimplicialModule dold_kan(const ChainComplex& c, int level) {
    const RingSpec& rg = c.ring();
    int top = c.top_degree();

    // per level: list of (k, value list), plus index lookup
    std::vector<std::vector<std::pair<int, std::vector<int>>>> tags(level + 1);
    std::vector<std::map<std::vector<int>, int>> index(level + 1);
    for (int n = 0; n <= level; ++n) {
        for (int k = 0; k <= std::min(n, top); ++k)
            for (auto& s : detail::surjections(n, k)) tags[n].emplace_back(k, s);
        for (int t = 0; t < int(tags[n].size()); ++t) index[n][tags[n][t].second] = t;
    }
    std::vector<DirectSum> sums(level + 1);
    std::vector<FgModule> levels(level + 1);
    for (int n = 0; n <= level; ++n) {
        std::vector<FgModule> parts;
        for (auto& [k, s] : tags[n]) parts.push_back(c.term(k));
        sums[n] = direct_sum(parts, rg);
        levels[n] = sums[n].total;
    }

    std::vector<std::vector<ModuleMap>> faces(level + 1), degens(level + 1);
    for (int n = 1; n <= level; ++n) {
        for (int i = 0; i <= n; ++i) {
            ModuleMap f = ModuleMap::zero(levels[n], levels[n - 1]);
            for (int t = 0; t < int(tags[n].size()); ++t) {
                const auto& [k, s] = tags[n][t];
                // drop entry i
                std::vector<int> dropped;
                for (int p = 0; p <= n; ++p)
                    if (p != i) dropped.push_back(s[p]);
                // surjective onto [k]? find the unique missing value if not
                std::vector<bool> hit(k + 1, false);
                for (int v : dropped) hit[v] = true;
                int missing = -1;
                for (int v = 0; v <= k; ++v)
                    if (!hit[v]) { missing = v; break; }
                if (missing < 0) {
                    int tt = index[n - 1].at(dropped);
                    f = f + sums[n - 1].inject[tt].compose(
                                ModuleMap::identity(c.term(k)).compose(sums[n].project[t]));
                } else if (missing == 0) {
                    std::vector<int> compressed;
                    for (int v : dropped) compressed.push_back(v - 1);
                    int tt = index[n - 1].at(compressed);
                    f = f + sums[n - 1].inject[tt].compose(c.differential(k).compose(sums[n].project[t]));
                } // otherwise the component is zero
            }
            faces[n].push_back(f);
        }
    }
    for (int n = 0; n < level; ++n) {
        for (int j = 0; j <= n; ++j) {
            ModuleMap g = ModuleMap::zero(levels[n], levels[n + 1]);
            for (int t = 0; t < int(tags[n].size()); ++t) {
                const auto& [k, s] = tags[n][t];
                std::vector<int> dup;
                for (int p = 0; p <= n; ++p) {
                    dup.push_back(s[p]);
                    if (p == j) dup.push_back(s[p]);
                }
                int tt = index[n + 1].at(dup);
                g = g + sums[n + 1].inject[tt].compose(ModuleMap::identity(c.term(k)).compose(sums[n].project[t]));
            }
            degens[n].push_back(g);
        }
    }
    return SimplicialModule(rg, std::move(levels), std::move(faces), std::move(degens), false);
}

/// The canonical inclusion of c_n as the identity-surjection summand of
/// dold_kan(c) at level n; its image is the Moore chains submodule.
inline ModuleMap dold_kan_inclusion(const ChainComplex& c, const SimplicialModule& gk, int n) {
    // identity surjection sorts first lexicographically at its k = n slot;
    // recompute tag layout to find it
    const RingSpec& rg = c.ring();
    int top = c.top_degree();
    int offset = 0;
    for (int k = 0; k <= std::min(n, top); ++k) {
        auto ss = detail::surjections(n, k);
        for (auto& s : ss) {
            bool is_id = (k == n);
            if (is_id) {
                ExactMatrix inc(rg, gk.level(n).generators(), c.term(n).generators());
                for (int i = 0; i < c.term(n).generators(); ++i) inc.at(offset + i, i) = 1;
                return ModuleMap(c.term(n), gk.level(n), inc, false);
            }
            offset += c.term(k).generators();
        }
    }
    return ModuleMap::zero(c.term(n), gk.level(n));
}

struct SimplicialPostnikov {
    SimplicialModule p;
    std::vector<ModuleMap> r; // levelwise map from x to p
};

/// Postnikov section by coskeletal filling: agree through level n+1, then
/// matching objects all the way up.
inline SimplicialPostnikov postnikov_section_simplicial(const SimplicialModule& x, int n) {
    int N = x.truncation_level();
    if (N < n + 2) throw ring_error("postnikov_section_simplicial: insufficient truncation");
    const RingSpec& rg = x.ring();

    std::vector<FgModule> levels;
    std::vector<std::vector<ModuleMap>> faces(N + 1), degens(N + 1);
    std::vector<ModuleMap> r;
    for (int k = 0; k <= n + 1; ++k) {
        levels.push_back(x.level(k));
        if (k >= 1)
            for (int i = 0; i <= k; ++i) faces[k].push_back(x.face(k, i));
        if (k < n + 1)
            for (int j = 0; j <= k; ++j) degens[k].push_back(x.degeneracy(k, j));
        r.push_back(ModuleMap::identity(x.level(k)));
    }

    for (int k = n + 2; k <= N; ++k) {
        // matching object of the partial object built so far
        SimplicialModule partial(rg, levels,
                                 std::vector<std::vector<ModuleMap>>(faces.begin(), faces.begin() + k),
                                 std::vector<std::vector<ModuleMap>>(degens.begin(), degens.begin() + k), false);
        MatchingObject mo = detail::matching_object_data(partial, k);
        levels.push_back(mo.object);
        // faces: coordinate projections
        for (int i = 0; i <= k; ++i)
            faces[k].push_back(mo.product.project[i].compose(mo.inclusion));
        // degeneracies into the new level: tuple of d_i s_j via the identities
        for (int j = 0; j <= k - 1; ++j) {
            ModuleMap stacked = ModuleMap::zero(levels[k - 1], mo.product.total);
            for (int i = 0; i <= k; ++i) {
                ModuleMap comp = ModuleMap::zero(levels[k - 1], levels[k - 1]);
                if (i < j)
                    comp = (k - 2 >= 0 && j - 1 <= k - 2)
                               ? degens[k - 2][j - 1].compose(faces[k - 1][i])
                               : comp;
                else if (i == j || i == j + 1)
                    comp = ModuleMap::identity(levels[k - 1]);
                else
                    comp = degens[k - 2][j].compose(faces[k - 1][i - 1]);
                stacked = stacked + mo.product.inject[i].compose(comp);
            }
            degens[k - 1].push_back(corestrict(mo.inclusion, stacked));
        }
        // r at level k: tuple of r_{k-1} d_i
        ModuleMap rstack = ModuleMap::zero(x.level(k), mo.product.total);
        for (int i = 0; i <= k; ++i) rstack = rstack + mo.product.inject[i].compose(r[k - 1].compose(x.face(k, i)));
        r.push_back(corestrict(mo.inclusion, rstack));
    }

    SimplicialModule p(rg, std::move(levels), std::move(faces), std::move(degens));
    // the levelwise maps commute with the structure; package and check
    SimplicialMap rm{x, p, r};
    rm.validate();
    return {p, r};
}

/// The normalization idempotent e = (1 - s_0 d_1)(1 - s_1 d_2)...(1 - s_{n-1} d_n)
/// projecting X_n onto the Moore chains summand.
inline ModuleMap chains_projector(const SimplicialModule& x, int n) {
    ModuleMap e = ModuleMap::identity(x.level(n));
    for (int j = n - 1; j >= 0; --j) {
        ModuleMap pj = ModuleMap::identity(x.level(n)) - x.degeneracy(n - 1, j).compose(x.face(n, j + 1));
        e = pj.compose(e);
    }
    return e;
}

} // namespace mtower
