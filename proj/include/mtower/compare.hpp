#pragma once

#include "mtower/em.hpp"
#include "mtower/simplicial.hpp"

#include <sstream>

namespace mtower {

struct JointVerdict {
    int position = 0; // index of the middle term
    bool composite_zero = false;
    bool image_equals_kernel = false;
    bool exact() const { return composite_zero && image_equals_kernel; }
};

/// A finite stretch of an exact sequence with recomputable verdicts.
struct ExactSequenceReport {
    std::vector<std::string> labels;
    std::vector<FgModule> terms;
    std::vector<ModuleMap> maps; // maps[i] : terms[i] -> terms[i+1]
    std::vector<JointVerdict> verdicts;
    std::string construction;

    void verify() {
        verdicts.clear();
        for (size_t i = 0; i + 1 < maps.size(); ++i) {
            JointVerdict v;
            v.position = int(i) + 1;
            ModuleMap comp = maps[i + 1].compose(maps[i]);
            v.composite_zero = comp.is_zero_map();
            if (v.composite_zero)
                v.image_equals_kernel = Subquotient(maps[i], maps[i + 1]).module().is_zero_module();
            verdicts.push_back(v);
        }
    }

    bool all_exact() const {
        for (const auto& v : verdicts)
            if (!v.exact()) return false;
        return true;
    }

    std::string table() const {
        std::ostringstream os;
        os << construction << "\n";
        for (size_t i = 0; i < terms.size(); ++i) {
            os << (i < labels.size() ? labels[i] : "term") << ": ";
            const auto& c = terms[i].canonical();
            os << "free^" << c.free_rank;
            for (const auto& f : c.factors) os << " + Z/" << f.get_str();
            if (i >= 1 && i + 1 < terms.size()) {
                const auto& v = verdicts[i - 1];
                os << "   [exact: " << (v.exact() ? "yes" : "NO") << "]";
            }
            os << "\n";
        }
        return os.str();
    }
};

struct GammaGroups {
    std::vector<FgModule> gamma; // gamma[n], degree 0 upward
    FgModule at(int n) const {
        if (n < 0 || n >= int(gamma.size())) return FgModule::zero(RingSpec::integers());
        return gamma[n];
    }
};

struct ComparisonLes {
    GammaGroups gamma;
    ExactSequenceReport report;
    ChainComplex target_restricted; // res(Tx)
};

/// Comparison long exact sequence for base change along Z -> Z/m: Gamma is
/// the homology of the mapping cocone of the unit, and the sequence
/// Gamma_n -> H_n x -> H_n Tx -> Gamma_{n-1} is assembled from the cocone.
inline ComparisonLes comparison_les(const ChainComplex& x, const RingSpec& target, int lo, int hi) {
    if (!x.ring().is_integers()) throw ring_error("comparison_les: complex must live over Z");
    const RingSpec Z = RingSpec::integers();
    ChainMap u = target.is_integers() ? ChainMap::identity(x) : unit_map(x, target);
    ChainComplex rtx = u.target();
    MappingCocone fib = mapping_cocone(u);

    ComparisonLes out;
    out.target_restricted = rtx;
    int gtop = fib.fib.top_degree();
    for (int n = 0; n <= std::max(gtop, hi); ++n) out.gamma.gamma.push_back(homology(fib.fib, n));

    ExactSequenceReport& rep = out.report;
    rep.construction = "comparison sequence for - (x) " + target.str();

    // cached homology data
    std::vector<Subquotient> hx, ht, hg;
    int top = std::max({x.top_degree(), rtx.top_degree(), hi + 1});
    for (int n = 0; n <= top; ++n) {
        hx.push_back(homology_data(x, n));
        ht.push_back(homology_data(rtx, n));
        hg.push_back(homology_data(fib.fib, n));
    }

    auto connecting = [&](int n) { // H_n(rtx) -> Gamma_{n-1}
        const FgModule& src = ht[n].module();
        const FgModule& tgt = (n >= 1) ? hg[n - 1].module() : FgModule::zero(Z);
        ExactMatrix m(Z, tgt.generators(), src.generators());
        if (n >= 1) {
            for (int j = 0; j < src.generators(); ++j) {
                std::vector<mpz_class> z(src.generators(), mpz_class(0));
                z[j] = 1;
                auto rep_cycle = ht[n].rep_from_gen_coords(z);
                auto amb = fib.sums[n - 1].inject[1].apply(rep_cycle);
                auto cls = hg[n - 1].to_class(fib.embed(n - 1, amb));
                m.set_column(j, tgt.from_canonical_coords(cls));
            }
        }
        return ModuleMap(src, tgt, m, false);
    };

    for (int n = hi; n >= lo; --n) {
        rep.labels.push_back("Gamma_" + std::to_string(n));
        rep.terms.push_back(hg[n].module());
        rep.maps.push_back(induced_on_homology(fib.projection, n, hg[n], hx[n])); // s_n
        rep.labels.push_back("H_" + std::to_string(n) + "(x)");
        rep.terms.push_back(hx[n].module());
        rep.maps.push_back(induced_on_homology(u, n, hx[n], ht[n])); // h_n
        rep.labels.push_back("H_" + std::to_string(n) + "(Tx)");
        rep.terms.push_back(ht[n].module());
        if (n > lo) {
            rep.maps.push_back(connecting(n)); // boundary
        }
    }
    // close the sequence at the bottom with the final Gamma term; at lo = 0
    // the report simply ends at H_0(Tx)
    if (lo >= 1) {
        rep.maps.push_back(connecting(lo));
        rep.labels.push_back("Gamma_" + std::to_string(lo - 1));
        rep.terms.push_back(hg[lo - 1].module());
    }
    rep.verify();
    return out;
}

/// The snake-lemma oracle: homology long exact sequence of
/// 0 -> x --p--> x -> x/p -> 0, used to cross-check the Gamma terms.
inline ExactSequenceReport multiplication_les_oracle(const ChainComplex& x, const mpz_class& p, int lo, int hi) {
    const RingSpec Z = RingSpec::integers();
    ChainComplex rtx = restrict_to_integers(base_change(x, RingSpec::integers_mod(p)));
    std::vector<Subquotient> hx, ht;
    int top = std::max(x.top_degree(), hi + 1);
    for (int n = 0; n <= top; ++n) {
        hx.push_back(homology_data(x, n));
        ht.push_back(homology_data(rtx, n));
    }
    ExactSequenceReport rep;
    rep.construction = "homology sequence of 0 -> x --" + p.get_str() + "--> x -> x/" + p.get_str() + " -> 0";
    auto connecting = [&](int n) { // H_n(x/p) -> H_{n-1}(x): lift, differentiate, divide by p
        const FgModule& src = ht[n].module();
        const FgModule& tgt = (n >= 1) ? hx[n - 1].module() : FgModule::zero(Z);
        ExactMatrix m(Z, tgt.generators(), src.generators());
        for (int j = 0; j < src.generators() && n >= 1; ++j) {
            std::vector<mpz_class> z(src.generators(), mpz_class(0));
            z[j] = 1;
            auto rep_cycle = ht[n].rep_from_gen_coords(z); // integer lift of a mod-p cycle
            auto dx = x.differential(n).matrix().apply(rep_cycle);
            std::vector<mpz_class> w(dx.size());
            for (size_t t = 0; t < dx.size(); ++t) {
                if (!mpz_divisible_p(dx[t].get_mpz_t(), p.get_mpz_t()))
                    throw ring_error("snake oracle: boundary of a lifted cycle not divisible");
                mpz_divexact(w[t].get_mpz_t(), dx[t].get_mpz_t(), p.get_mpz_t());
            }
            auto cls = hx[n - 1].to_class(w);
            m.set_column(j, tgt.from_canonical_coords(cls));
        }
        return ModuleMap(src, tgt, m, false);
    };
    for (int n = hi; n >= lo; --n) {
        rep.labels.push_back("H_" + std::to_string(n) + "(x) [times p]");
        rep.terms.push_back(hx[n].module());
        ModuleMap mult = ModuleMap(hx[n].module(), hx[n].module(),
                                   ExactMatrix::identity(Z, hx[n].module().generators()).scaled(p), false);
        rep.maps.push_back(mult);
        rep.labels.push_back("H_" + std::to_string(n) + "(x)");
        rep.terms.push_back(hx[n].module());
        ChainMap red = unit_map(x, RingSpec::integers_mod(p));
        rep.maps.push_back(induced_on_homology(red, n, hx[n], ht[n]));
        rep.labels.push_back("H_" + std::to_string(n) + "(x/p)");
        rep.terms.push_back(ht[n].module());
        if (n > lo) rep.maps.push_back(connecting(n));
    }
    if (lo >= 1) {
        rep.maps.push_back(connecting(lo));
        rep.labels.push_back("H_" + std::to_string(lo - 1) + "(x)");
        rep.terms.push_back(hx[lo - 1].module());
    }
    rep.verify();
    return rep;
}

struct ModPHomotopy {
    FgModule group;              // pi_k(x; Z/p)
    ExactSequenceReport ses;     // 0 -> pi_k (x) Z/p -> group -> Tor-term -> 0
    FgModule tor_term;           // ker(p : pi_{k-1} -> pi_{k-1})
};

/// Mod-p homotopy of a simplicial module: homotopy classes from the shifted
/// mod-p Moore complex into the normalization, with the universal
/// coefficient sequence verified exactly.
inline ModPHomotopy mod_p_homotopy(const SimplicialModule& x, const mpz_class& p, int k) {
    if (k < 1) throw ring_error("mod_p_homotopy: degree must be >= 1");
    if (k + 1 > x.truncation_level()) throw ring_error("mod_p_homotopy: insufficient truncation");
    if (!x.ring().is_integers()) throw ring_error("mod_p_homotopy: simplicial module must live over Z");
    const RingSpec Z = RingSpec::integers();

    MooreComplex mc = moore_complex(x);
    const ChainComplex& N = mc.normalized;

    // Moore complex Z --p--> Z in degrees k, k-1
    std::vector<int> ranks(k + 1, 0);
    ranks[k] = 1;
    ranks[k - 1] = 1;
    std::vector<ExactMatrix> mats(k + 1, ExactMatrix(Z, 0, 0));
    for (int t = 1; t <= k; ++t) mats[t] = ExactMatrix(Z, ranks[t - 1], ranks[t]);
    mats[k] = ExactMatrix(Z, 1, 1);
    mats[k].at(0, 0) = p;
    ChainComplex moore = ChainComplex::from_matrices(Z, ranks, mats);

    HomotopyClasses hc(moore, N);
    ModPHomotopy out;
    out.group = hc.group();

    Subquotient hk = homology_data(N, k);
    Subquotient hk1 = homology_data(N, k - 1);
    FgModule pik = hk.module();
    FgModule pik1 = hk1.module();

    // alpha: pi_k (x) Z/p -> pi_k(x; Z/p), precomposition with the collapse
    FgModule tensored = tensor_with_cyclic(pik, p);
    ExactMatrix am(Z, out.group.generators(), tensored.generators());
    for (int j = 0; j < pik.generators(); ++j) {
        std::vector<mpz_class> z(pik.generators(), mpz_class(0));
        z[j] = 1;
        auto cyc = hk.rep_from_gen_coords(z);
        std::vector<ModuleMap> comps;
        for (int t = 0; t <= k; ++t) comps.push_back(ModuleMap::zero(moore.term(t), N.term(t)));
        ExactMatrix col(Z, N.term(k).generators(), 1);
        col.set_column(0, cyc);
        comps[k] = ModuleMap(moore.term(k), N.term(k), col, false);
        ChainMap f(moore, N, comps); // chain map since cyc is a cycle
        auto cls = hc.classify(f);
        am.set_column(j, out.group.from_canonical_coords(cls));
    }
    ModuleMap alpha(tensored, out.group, am); // verification checks p-divisibility relations

    // beta: restrict a representative to degree k-1; lands in the p-torsion
    ModuleMap pmult(pik1, pik1, ExactMatrix::identity(Z, pik1.generators()).scaled(p), false);
    KernelData tor = map_subquotients(pmult).kernel;
    out.tor_term = tor.module;
    ExactMatrix bm(Z, tor.module.generators(), out.group.generators());
    for (int j = 0; j < out.group.generators(); ++j) {
        std::vector<mpz_class> z(out.group.generators(), mpz_class(0));
        z[j] = 1;
        ChainMap f = hc.representative(out.group.to_canonical_coords(z));
        std::vector<mpz_class> bottom = f.component(k - 1).matrix().column(0);
        auto cls = hk1.to_class(bottom);
        // express the class inside the kernel submodule
        ExactMatrix rhs(Z, pik1.generators(), 1);
        rhs.set_column(0, pik1.from_canonical_coords(cls));
        ExactMatrix sys = ExactMatrix::hcat(tor.inclusion.matrix(), pik1.relations());
        auto sol = solve(sys, rhs);
        if (!sol) throw ring_error("mod_p_homotopy: bottom class is not p-torsion");
        std::vector<mpz_class> coords(tor.module.generators());
        for (int i = 0; i < tor.module.generators(); ++i) coords[i] = sol->at(i, 0);
        bm.set_column(j, coords);
    }
    ModuleMap beta(out.group, tor.module, bm, false);

    ExactSequenceReport& ses = out.ses;
    ses.construction = "0 -> pi_k (x) Z/p -> pi_k(x; Z/p) -> Tor(pi_{k-1}, Z/p) -> 0  (k = " + std::to_string(k) + ")";
    FgModule zero = FgModule::zero(Z);
    ses.labels = {"0", "pi_k (x) Z/p", "pi_k(x; Z/p)", "Tor(pi_{k-1}, Z/p)", "0"};
    ses.terms = {zero, tensored, out.group, tor.module, zero};
    ses.maps = {ModuleMap::zero(zero, tensored), alpha, beta, ModuleMap::zero(tor.module, zero)};
    ses.verify();
    return out;
}

} // namespace mtower
