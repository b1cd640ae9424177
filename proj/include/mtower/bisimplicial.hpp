#pragma once

#include "mtower/simplicial.hpp"

namespace mtower {

/// Direct sum of simplicial modules with injections/projections, levelwise.
struct SimplicialSum {
    SimplicialModule total;
    std::vector<SimplicialMap> inject;
    std::vector<SimplicialMap> project;
};

inline SimplicialSum simplicial_direct_sum(const std::vector<SimplicialModule>& parts, const RingSpec& rg) {
    int N = -1;
    for (const auto& p : parts) N = std::max(N, p.truncation_level());
    std::vector<DirectSum> sums;
    std::vector<FgModule> levels;
    for (int q = 0; q <= N; ++q) {
        std::vector<FgModule> mods;
        for (const auto& p : parts) mods.push_back(p.level(q));
        sums.push_back(direct_sum(mods, rg));
        levels.push_back(sums.back().total);
    }
    std::vector<std::vector<ModuleMap>> faces(N + 1), degens(N + 1);
    for (int q = 1; q <= N; ++q)
        for (int i = 0; i <= q; ++i) {
            ModuleMap f = ModuleMap::zero(levels[q], levels[q - 1]);
            for (size_t t = 0; t < parts.size(); ++t)
                f = f + sums[q - 1].inject[t].compose(parts[t].face(q, i).compose(sums[q].project[t]));
            faces[q].push_back(f);
        }
    for (int q = 0; q < N; ++q)
        for (int j = 0; j <= q; ++j) {
            ModuleMap s = ModuleMap::zero(levels[q], levels[q + 1]);
            for (size_t t = 0; t < parts.size(); ++t)
                s = s + sums[q + 1].inject[t].compose(parts[t].degeneracy(q, j).compose(sums[q].project[t]));
            degens[q].push_back(s);
        }
    SimplicialSum out;
    out.total = SimplicialModule(rg, levels, faces, degens, false);
    for (size_t t = 0; t < parts.size(); ++t) {
        std::vector<ModuleMap> inc, prj;
        for (int q = 0; q <= parts[t].truncation_level(); ++q) inc.push_back(sums[q].inject[t]);
        for (int q = 0; q <= N; ++q) prj.push_back(sums[q].project[t]);
        out.inject.push_back({parts[t], out.total, inc});
        out.project.push_back({out.total, parts[t], prj});
    }
    return out;
}

/// Truncated bisimplicial module: one internal simplicial module per
/// external level, plus external faces/degeneracies given as levelwise maps
/// commuting with both structures.
class BisimplicialModule {
public:
    BisimplicialModule() = default;

    BisimplicialModule(RingSpec ring, std::vector<SimplicialModule> rows,
                       std::vector<std::vector<SimplicialMap>> ext_faces,
                       std::vector<std::vector<SimplicialMap>> ext_degens, bool verify = true)
        : ring_(std::move(ring)), rows_(std::move(rows)), ext_faces_(std::move(ext_faces)),
          ext_degens_(std::move(ext_degens)) {
        if (verify) validate();
    }

    const RingSpec& ring() const { return ring_; }
    int external_level() const { return int(rows_.size()) - 1; }
    int internal_level() const { return rows_.empty() ? -1 : rows_[0].truncation_level(); }
    const SimplicialModule& row(int p) const { return rows_.at(p); }
    const SimplicialMap& ext_face(int p, int i) const { return ext_faces_.at(p).at(i); }
    const SimplicialMap& ext_degeneracy(int p, int j) const { return ext_degens_.at(p).at(j); }

    void validate() const {
        int P = external_level();
        for (int p = 1; p <= P; ++p) {
            if (int(ext_faces_[p].size()) != p + 1) throw ring_error("external face count wrong");
            for (int i = 0; i <= p; ++i) ext_faces_[p][i].validate(); // commutes with internal structure
        }
        for (int p = 0; p < P; ++p) {
            if (int(ext_degens_[p].size()) != p + 1) throw ring_error("external degeneracy count wrong");
            for (int j = 0; j <= p; ++j) ext_degens_[p][j].validate();
        }
        auto eq = [&](const SimplicialMap& a, const SimplicialMap& b) {
            for (size_t q = 0; q < a.comps.size() && q < b.comps.size(); ++q)
                if (!a.comps[q].equal_map(b.comps[q])) return false;
            return true;
        };
        auto comp = [&](const SimplicialMap& outer, const SimplicialMap& inner) {
            std::vector<ModuleMap> comps;
            for (size_t q = 0; q < inner.comps.size(); ++q) comps.push_back(outer.comps[q].compose(inner.comps[q]));
            return SimplicialMap{inner.source, outer.target, comps};
        };
        for (int p = 2; p <= P; ++p)
            for (int j = 1; j <= p; ++j)
                for (int i = 0; i < j; ++i)
                    if (!eq(comp(ext_face(p - 1, i), ext_face(p, j)), comp(ext_face(p - 1, j - 1), ext_face(p, i))))
                        throw ring_error("external identity d_i d_j fails");
        for (int p = 0; p < P; ++p)
            for (int j = 0; j <= p; ++j)
                for (int i = 0; i <= p + 1; ++i) {
                    SimplicialMap lhs = comp(ext_face(p + 1, i), ext_degeneracy(p, j));
                    bool ok;
                    if (i == j || i == j + 1) {
                        ok = true;
                        for (size_t q = 0; q < lhs.comps.size(); ++q) {
                            ModuleMap idq = ModuleMap::identity(rows_[p].level(int(q)));
                            if (!lhs.comps[q].equal_map(idq)) ok = false;
                        }
                    } else if (i < j) {
                        ok = eq(lhs, comp(ext_degeneracy(p - 1, j - 1), ext_face(p, i)));
                    } else {
                        ok = eq(lhs, comp(ext_degeneracy(p - 1, j), ext_face(p, i - 1)));
                    }
                    if (!ok) throw ring_error("external identity d_i s_j fails");
                }
    }

private:
    RingSpec ring_;
    std::vector<SimplicialModule> rows_;
    std::vector<std::vector<SimplicialMap>> ext_faces_;
    std::vector<std::vector<SimplicialMap>> ext_degens_;
};

inline SimplicialMap simplicial_compose(const SimplicialMap& outer, const SimplicialMap& inner) {
    std::vector<ModuleMap> comps;
    for (size_t q = 0; q < inner.comps.size() && q < outer.comps.size(); ++q)
        comps.push_back(outer.comps[q].compose(inner.comps[q]));
    return SimplicialMap{inner.source, outer.target, comps};
}

/// A double complex presented as external chain data: one internal chain
/// complex per external degree and commuting horizontal chain maps.
struct DoubleComplex {
    std::vector<ChainComplex> columns;       // columns[n]: internal complex at external degree n
    std::vector<ChainMap> horizontal;        // horizontal[n]: columns[n] -> columns[n-1], n >= 1

    void validate() const {
        for (size_t n = 1; n < horizontal.size(); ++n) {
            horizontal[n].validate();
            if (n >= 2 && !horizontal[n - 1].compose(horizontal[n]).is_zero_map())
                throw ring_error("DoubleComplex: horizontal d^2 != 0");
        }
    }
};

/// Dold-Kan in the external direction applied to a complex of internal
/// simplicial modules (the columns are normalized internally first via the
/// ordinary Dold-Kan functor).
inline BisimplicialModule bisimplicial_from_double(const DoubleComplex& D, int ext_level, int int_level) {
    if (D.columns.empty()) throw ring_error("bisimplicial_from_double: empty double complex");
    const RingSpec rg = D.columns[0].ring();
    int top = int(D.columns.size()) - 1;

    // internal realizations and induced horizontal simplicial maps
    std::vector<SimplicialModule> G;
    for (int n = 0; n <= top; ++n) G.push_back(dold_kan(D.columns[n], int_level));
    auto induced = [&](int n) { // G_n -> G_{n-1} from horizontal[n]
        std::vector<ModuleMap> comps;
        for (int q = 0; q <= int_level; ++q) {
            // blockwise: same surjection layout, component horizontal[n] at each summand
            int topk_s = D.columns[n].top_degree();
            int topk_t = D.columns[n - 1].top_degree();
            ExactMatrix m(rg, G[n - 1].level(q).generators(), G[n].level(q).generators());
            int coff = 0;
            std::vector<int> toff; // target offsets per k
            int acc = 0;
            for (int k = 0; k <= std::min(q, topk_t); ++k) {
                toff.push_back(acc);
                acc += int(detail::surjections(q, k).size()) * D.columns[n - 1].term(k).generators();
            }
            for (int k = 0; k <= std::min(q, topk_s); ++k) {
                auto ss = detail::surjections(q, k);
                ExactMatrix f = D.horizontal[n].component(k).matrix();
                for (size_t s = 0; s < ss.size(); ++s) {
                    if (k <= std::min(q, topk_t)) {
                        int t0 = toff[k] + int(s) * D.columns[n - 1].term(k).generators();
                        for (int a = 0; a < f.rows(); ++a)
                            for (int b = 0; b < f.cols(); ++b) m.at(t0 + a, coff + b) = f.at(a, b);
                    }
                    coff += D.columns[n].term(k).generators();
                }
            }
            comps.emplace_back(G[n].level(q), G[n - 1].level(q), m, false);
        }
        return SimplicialMap{G[n], G[n - 1], comps};
    };
    std::vector<SimplicialMap> H;
    H.push_back(SimplicialMap{});
    for (int n = 1; n <= top; ++n) H.push_back(induced(n));

    // external Dold-Kan with simplicial blocks
    std::vector<std::vector<std::pair<int, std::vector<int>>>> tags(ext_level + 1);
    std::vector<std::map<std::vector<int>, int>> index(ext_level + 1);
    for (int p = 0; p <= ext_level; ++p) {
        for (int k = 0; k <= std::min(p, top); ++k)
            for (auto& s : detail::surjections(p, k)) tags[p].emplace_back(k, s);
        for (int t = 0; t < int(tags[p].size()); ++t) index[p][tags[p][t].second] = t;
    }
    std::vector<SimplicialSum> sums(ext_level + 1);
    std::vector<SimplicialModule> rows(ext_level + 1);
    for (int p = 0; p <= ext_level; ++p) {
        std::vector<SimplicialModule> parts;
        for (auto& [k, s] : tags[p]) parts.push_back(G[k]);
        sums[p] = simplicial_direct_sum(parts, rg);
        rows[p] = sums[p].total;
    }
    auto zero_smap = [&](const SimplicialModule& s, const SimplicialModule& t) {
        std::vector<ModuleMap> comps;
        for (int q = 0; q <= s.truncation_level(); ++q) comps.push_back(ModuleMap::zero(s.level(q), t.level(q)));
        return SimplicialMap{s, t, comps};
    };
    auto add_smap = [&](SimplicialMap& acc, const SimplicialMap& part) {
        for (size_t q = 0; q < acc.comps.size(); ++q) acc.comps[q] = acc.comps[q] + part.comps[q];
    };
    std::vector<std::vector<SimplicialMap>> ext_faces(ext_level + 1), ext_degens(ext_level + 1);
    for (int p = 1; p <= ext_level; ++p)
        for (int i = 0; i <= p; ++i) {
            SimplicialMap f = zero_smap(rows[p], rows[p - 1]);
            for (int t = 0; t < int(tags[p].size()); ++t) {
                const auto& [k, s] = tags[p][t];
                std::vector<int> dropped;
                for (int u = 0; u <= p; ++u)
                    if (u != i) dropped.push_back(s[u]);
                std::vector<bool> hit(k + 1, false);
                for (int v : dropped) hit[v] = true;
                int missing = -1;
                for (int v = 0; v <= k; ++v)
                    if (!hit[v]) { missing = v; break; }
                if (missing < 0) {
                    int tt = index[p - 1].at(dropped);
                    add_smap(f, simplicial_compose(sums[p - 1].inject[tt], sums[p].project[t]));
                } else if (missing == 0) {
                    std::vector<int> compressed;
                    for (int v : dropped) compressed.push_back(v - 1);
                    int tt = index[p - 1].at(compressed);
                    add_smap(f, simplicial_compose(sums[p - 1].inject[tt],
                                                   simplicial_compose(H[k], sums[p].project[t])));
                }
            }
            ext_faces[p].push_back(f);
        }
    for (int p = 0; p < ext_level; ++p)
        for (int j = 0; j <= p; ++j) {
            SimplicialMap s = zero_smap(rows[p], rows[p + 1]);
            for (int t = 0; t < int(tags[p].size()); ++t) {
                const auto& [k, sj] = tags[p][t];
                std::vector<int> dup;
                for (int u = 0; u <= p; ++u) {
                    dup.push_back(sj[u]);
                    if (u == j) dup.push_back(sj[u]);
                }
                int tt = index[p + 1].at(dup);
                add_smap(s, simplicial_compose(sums[p + 1].inject[tt], sums[p].project[t]));
            }
            ext_degens[p].push_back(s);
        }
    return BisimplicialModule(rg, rows, ext_faces, ext_degens);
}

} // namespace mtower
