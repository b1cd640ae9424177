#pragma once

#include "mtower/hom_complex.hpp"

#include <algorithm>

namespace mtower {

struct HomotopyEquivalence {
    ChainMap f;        // c -> d
    ChainMap g;        // d -> c
    ChainHomotopy gf;  // g o f ~ id_c
    ChainHomotopy fg;  // f o g ~ id_d
};

namespace detail {

/// Elementary decomposition of a bounded free Z-complex: unimodular
/// per-degree basis changes P_k with P_{k-1} d_k P_k^{-1} having at most one
/// nonzero (positive) entry per row and column. Every free complex over a
/// PID splits into spheres Z[k] and disks (Z -a-> Z).
struct ElementaryDecomposition {
    std::vector<ExactMatrix> P, Pinv;       // per degree
    std::vector<ExactMatrix> D;             // transformed differentials (index k >= 1)
    // disk pairs: (degree k, target coord in term k-1, source coord in term k, value a)
    struct Disk { int k; int target; int source; mpz_class a; };
    std::vector<Disk> disks;
    std::vector<std::pair<int, int>> spheres; // (degree, coord)
};

inline ElementaryDecomposition decompose_elementary(const ChainComplex& c) {
    if (!c.ring().is_integers()) throw ring_error("decompose_elementary: ring must be Z");
    if (!c.degreewise_free()) throw ring_error("decompose_elementary: complex must be degreewise free");
    const RingSpec Z = RingSpec::integers();
    int top = c.top_degree();
    ElementaryDecomposition out;
    out.P.resize(top + 1);
    out.Pinv.resize(top + 1);
    out.D.resize(top + 2, ExactMatrix(Z, 0, 0));
    for (int k = 0; k <= top; ++k) {
        int g = c.term(k).generators();
        out.P[k] = ExactMatrix::identity(Z, g);
        out.Pinv[k] = ExactMatrix::identity(Z, g);
    }

    // target-paired coordinates of term k-1 after processing d_k
    std::vector<std::vector<bool>> source_paired(top + 1);
    for (int k = 0; k <= top; ++k) source_paired[k].assign(c.term(k).generators(), false);

    for (int k = 1; k <= top; ++k) {
        ExactMatrix M = out.P[k - 1] * c.differential(k).matrix() * out.Pinv[k];
        // rows at source-paired coords of term k-1 vanish (d o d = 0)
        std::vector<int> free_rows;
        for (int i = 0; i < M.rows(); ++i)
            if (!source_paired[k - 1][i]) free_rows.push_back(i);
        ExactMatrix sub(Z, int(free_rows.size()), M.cols());
        for (size_t r = 0; r < free_rows.size(); ++r)
            for (int j = 0; j < M.cols(); ++j) sub.at(int(r), j) = M.at(free_rows[r], j);
        SmithForm s = smith(sub);

        // embed the row transform into the full coordinate set
        int g1 = M.rows();
        ExactMatrix U(Z, g1, g1), Uinv(Z, g1, g1);
        for (int i = 0; i < g1; ++i) U.at(i, i) = 1, Uinv.at(i, i) = 1;
        for (size_t a = 0; a < free_rows.size(); ++a)
            for (size_t b = 0; b < free_rows.size(); ++b) {
                U.at(free_rows[a], free_rows[b]) = s.u.at(int(a), int(b));
                Uinv.at(free_rows[a], free_rows[b]) = s.uinv.at(int(a), int(b));
            }

        out.P[k - 1] = U * out.P[k - 1];
        out.Pinv[k - 1] = out.Pinv[k - 1] * Uinv;
        out.P[k] = s.vinv * out.P[k];
        out.Pinv[k] = out.Pinv[k] * s.v;

        ExactMatrix Dk = out.P[k - 1] * c.differential(k).matrix() * out.Pinv[k];
        out.D[k] = Dk;
        for (int j = 0; j < s.rank; ++j) {
            ElementaryDecomposition::Disk disk;
            disk.k = k;
            disk.target = free_rows[j];
            disk.source = j;
            disk.a = s.d.at(j, j);
            out.disks.push_back(disk);
            source_paired[k][j] = true;
        }
    }

    // spheres: coordinates neither source- nor target-paired
    std::vector<std::vector<bool>> target_paired(top + 1);
    for (int k = 0; k <= top; ++k) target_paired[k].assign(c.term(k).generators(), false);
    for (const auto& d : out.disks) target_paired[d.k - 1][d.target] = true;
    for (int k = 0; k <= top; ++k)
        for (int i = 0; i < c.term(k).generators(); ++i)
            if (!source_paired[k][i] && !target_paired[k][i]) out.spheres.emplace_back(k, i);
    return out;
}

} // namespace detail

/// Witnessed homotopy equivalence search. Over Z (degreewise free) the
/// decomposition into elementary complexes is matched directly, so a witness
/// is always produced when the homology agrees. Over Z/m the strict homotopy
/// classes are enumerated and tested by cone contractibility, so a miss is a
/// certified negative.
inline std::optional<HomotopyEquivalence> find_homotopy_equivalence(const ChainComplex& c, const ChainComplex& d,
                                                                    size_t search_cap = 200000) {
    require_same_ring(c.ring(), d.ring(), "find_homotopy_equivalence");
    const RingSpec& rg = c.ring();

    if (rg.is_integers()) {
        if (!c.degreewise_free() || !d.degreewise_free())
            throw ring_error("find_homotopy_equivalence over Z requires degreewise free complexes");
        auto dc = detail::decompose_elementary(c);
        auto dd = detail::decompose_elementary(d);

        // match non-unit disks by (degree, value) and spheres by degree
        auto disk_key = [](const detail::ElementaryDecomposition::Disk& x) {
            return std::pair<int, mpz_class>(x.k, x.a);
        };
        std::vector<detail::ElementaryDecomposition::Disk> tc, td;
        for (auto& x : dc.disks)
            if (x.a != 1) tc.push_back(x);
        for (auto& x : dd.disks)
            if (x.a != 1) td.push_back(x);
        auto cmp = [&](const auto& a, const auto& b) { return disk_key(a) < disk_key(b); };
        std::sort(tc.begin(), tc.end(), cmp);
        std::sort(td.begin(), td.end(), cmp);
        if (tc.size() != td.size()) return std::nullopt;
        for (size_t i = 0; i < tc.size(); ++i)
            if (disk_key(tc[i]) != disk_key(td[i])) return std::nullopt;
        std::sort(dc.spheres.begin(), dc.spheres.end());
        std::sort(dd.spheres.begin(), dd.spheres.end());
        {
            std::vector<int> sc, sd;
            for (auto& s : dc.spheres) sc.push_back(s.first);
            for (auto& s : dd.spheres) sd.push_back(s.first);
            if (sc != sd) return std::nullopt;
        }

        int top = std::max(c.top_degree(), d.top_degree());
        auto zero_mats = [&](const ChainComplex& a, const ChainComplex& b) {
            std::vector<ExactMatrix> ms;
            for (int k = 0; k <= top; ++k)
                ms.emplace_back(rg, b.term(k).generators(), a.term(k).generators());
            return ms;
        };
        std::vector<ExactMatrix> F = zero_mats(c, d), G = zero_mats(d, c);
        // identity on matched pieces, in transformed coordinates
        for (size_t i = 0; i < tc.size(); ++i) {
            F[tc[i].k].at(td[i].source, tc[i].source) = 1;
            F[tc[i].k - 1].at(td[i].target, tc[i].target) = 1;
            G[tc[i].k].at(tc[i].source, td[i].source) = 1;
            G[tc[i].k - 1].at(tc[i].target, td[i].target) = 1;
        }
        for (size_t i = 0; i < dc.spheres.size(); ++i) {
            F[dc.spheres[i].first].at(dd.spheres[i].second, dc.spheres[i].second) = 1;
            G[dc.spheres[i].first].at(dc.spheres[i].second, dd.spheres[i].second) = 1;
        }
        // homotopies: contract the unit disks on each side
        std::vector<ExactMatrix> Hc, Hd;
        for (int k = 0; k <= top; ++k) {
            Hc.emplace_back(rg, c.term(k + 1).generators(), c.term(k).generators());
            Hd.emplace_back(rg, d.term(k + 1).generators(), d.term(k).generators());
        }
        for (auto& x : dc.disks)
            if (x.a == 1) Hc[x.k - 1].at(x.source, x.target) = -1;
        for (auto& x : dd.disks)
            if (x.a == 1) Hd[x.k - 1].at(x.source, x.target) = -1;

        // conjugate back through the decompositions (P matrices only exist up
        // to each complex's top degree)
        std::vector<ModuleMap> fm, gm, hcm, hdm;
        auto Pof = [&](const detail::ElementaryDecomposition& dec, const ChainComplex& a, int k) {
            if (k <= a.top_degree()) return dec.P[k];
            return ExactMatrix(rg, 0, 0);
        };
        auto Pinvof = [&](const detail::ElementaryDecomposition& dec, const ChainComplex& a, int k) {
            if (k <= a.top_degree()) return dec.Pinv[k];
            return ExactMatrix(rg, 0, 0);
        };
        for (int k = 0; k <= top; ++k) {
            ExactMatrix m = (d.term(k).generators() && c.term(k).generators())
                                ? Pinvof(dd, d, k) * F[k] * Pof(dc, c, k)
                                : ExactMatrix(rg, d.term(k).generators(), c.term(k).generators());
            fm.emplace_back(c.term(k), d.term(k), m, false);
            ExactMatrix mg = (c.term(k).generators() && d.term(k).generators())
                                 ? Pinvof(dc, c, k) * G[k] * Pof(dd, d, k)
                                 : ExactMatrix(rg, c.term(k).generators(), d.term(k).generators());
            gm.emplace_back(d.term(k), c.term(k), mg, false);
            ExactMatrix mhc = (c.term(k + 1).generators() && c.term(k).generators())
                                  ? Pinvof(dc, c, k + 1) * Hc[k] * Pof(dc, c, k)
                                  : ExactMatrix(rg, c.term(k + 1).generators(), c.term(k).generators());
            hcm.emplace_back(c.term(k), c.term(k + 1), mhc, false);
            ExactMatrix mhd = (d.term(k + 1).generators() && d.term(k).generators())
                                  ? Pinvof(dd, d, k + 1) * Hd[k] * Pof(dd, d, k)
                                  : ExactMatrix(rg, d.term(k + 1).generators(), d.term(k).generators());
            hdm.emplace_back(d.term(k), d.term(k + 1), mhd, false);
        }
        ChainMap f(c, d, fm); // verified
        ChainMap g(d, c, gm);
        ChainHomotopy gf(g.compose(f), ChainMap::identity(c), hcm);
        ChainHomotopy fg(f.compose(g), ChainMap::identity(d), hdm);
        return HomotopyEquivalence{f, g, gf, fg};
    }

    // Z/m: every fg module is finite; enumerate strict homotopy classes of
    // maps c -> d, keep those inducing isomorphisms on homology, and decide
    // equivalence by contractibility of the cone.
    HomotopyClasses classes(c, d); // c's terms are modules over Z/m; Hom modules are the true ones
    if (classes.replacement().has_value())
        throw ring_error("internal: strict class computation must not replace the source");
    std::vector<Subquotient> hc, hd;
    int top = std::max(c.top_degree(), d.top_degree());
    for (int k = 0; k <= top; ++k) {
        hc.push_back(homology_data(c, k));
        hd.push_back(homology_data(d, k));
    }
    for (int k = 0; k <= top; ++k)
        if (!hc[k].module().isomorphic(hd[k].module())) return std::nullopt;

    mpz_class n = classes.group().order();
    if (n > search_cap) throw ring_error("search-bound-exceeded in find_homotopy_equivalence");

    for (auto& cls : classes.enumerate_classes(search_cap)) {
        ChainMap f = classes.representative(cls);
        bool iso = true;
        for (int k = 0; k <= top && iso; ++k) {
            ModuleMap hk = induced_on_homology(f, k, hc[k], hd[k]);
            auto parts = map_subquotients(hk);
            iso = parts.kernel.module.is_zero_module() && parts.cokernel.module.is_zero_module();
        }
        if (!iso) continue;
        MappingCone cone = mapping_cone(f);
        auto contraction = nullhomotopy(ChainMap::identity(cone.cone));
        if (!contraction) continue;

        // extract g, homotopies from the contraction blocks:
        // s = [[p, q], [r, t]] on cone_k = d_k + c_{k-1} gives g = r (chain
        // map), g f - id = dt + td, f g - id = -(dp + pd)
        std::vector<ModuleMap> gm, tm, pm;
        for (int k = 0; k <= top; ++k) {
            // cone_k = d_k + c_{k-1}; cone_{k+1} = d_{k+1} + c_k
            DirectSum sk = direct_sum({d.term(k), c.term(k - 1)}, rg);
            DirectSum sk1 = direct_sum({d.term(k + 1), c.term(k)}, rg);
            DirectSum sk2 = direct_sum({d.term(k + 2), c.term(k + 1)}, rg);
            ModuleMap s_k = contraction->component(k); // cone_k -> cone_{k+1}
            gm.push_back(sk1.project[1].compose(s_k.compose(sk.inject[0])));
            // homotopy on c: block [1][1] of s_{k+1} maps c_k -> c_{k+1}
            tm.push_back(sk2.project[1].compose(contraction->component(k + 1).compose(sk1.inject[1])));
            pm.push_back(-(sk1.project[0].compose(s_k.compose(sk.inject[0]))));
        }
        ChainMap g(d, c, gm);
        ChainMap gf_map = g.compose(f);
        ChainMap fg_map = f.compose(g);
        ChainHomotopy gf(gf_map, ChainMap::identity(c), tm);
        ChainHomotopy fg(fg_map, ChainMap::identity(d), pm);
        return HomotopyEquivalence{f, g, gf, fg};
    }
    return std::nullopt;
}

} // namespace mtower
