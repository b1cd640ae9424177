#pragma once

#include "mtower/equivalence.hpp"

namespace mtower {

/// Eilenberg-Mac Lane object: homology M concentrated in one degree. Over Z
/// the realization is a free presentation (basis of the relation lattice in
/// degree n+1, generators in degree n), so all terms are free. Over Z/m a
/// bounded free complex cannot carry concentrated homology in general, so
/// the realization is the presented module itself in degree n.
struct EMObject {
    FgModule module;
    int dimension = 0;
    ChainComplex realization;
};

inline EMObject em_object(const FgModule& m, int n) {
    if (n < 0) throw ring_error("em_object: negative dimension");
    const RingSpec& rg = m.ring();
    EMObject out;
    out.module = m;
    out.dimension = n;
    if (rg.is_mod()) {
        out.realization = ChainComplex::concentrated(m, n);
    } else {
        SmithForm s = smith(m.relations());
        ExactMatrix basis(rg, m.generators(), s.rank);
        ExactMatrix ud = s.uinv * s.d;
        for (int j = 0; j < s.rank; ++j)
            for (int i = 0; i < m.generators(); ++i) basis.at(i, j) = ud.at(i, j);
        std::vector<FgModule> terms(n, FgModule::zero(rg));
        std::vector<ModuleMap> diffs;
        for (int k = 0; k < n; ++k)
            diffs.push_back(ModuleMap::zero(terms[k], k ? terms[k - 1] : FgModule::zero(rg)));
        FgModule f0 = FgModule::free_module(rg, m.generators());
        FgModule f1 = FgModule::free_module(rg, s.rank);
        terms.push_back(f0);
        diffs.push_back(ModuleMap::zero(f0, n ? terms[n - 1] : FgModule::zero(rg)));
        terms.push_back(f1);
        diffs.emplace_back(f1, f0, basis, false);
        out.realization = ChainComplex(rg, std::move(terms), std::move(diffs), false);
    }
    // EM invariant: homology is m in degree n and zero elsewhere
    for (int k = 0; k <= out.realization.top_degree() + 1; ++k) {
        FgModule h = homology(out.realization, k);
        if (k == n) {
            if (!h.isomorphic(m)) throw ring_error("em_object: homology in the main degree is wrong");
        } else if (!h.is_zero_module()) {
            throw ring_error("em_object: stray homology in degree " + std::to_string(k));
        }
    }
    return out;
}

/// Identification H_n(realization) -> M as an explicit module map.
inline ModuleMap em_identification(const EMObject& e, const Subquotient& hdata) {
    const FgModule& H = hdata.module();
    ExactMatrix m(H.ring(), e.module.generators(), H.generators());
    // realization generators in degree n are the generators of M; a cycle
    // representative maps to its generator coordinates
    for (int j = 0; j < H.generators(); ++j) {
        std::vector<mpz_class> z(H.generators(), mpz_class(0));
        z[j] = 1;
        auto rep = hdata.rep_from_gen_coords(z);
        m.set_column(j, rep); // degree-n term generators coincide with M's
    }
    return ModuleMap(H, e.module, m, false);
}

/// An element of H^n(X; M) = [X, E(M, n)]: canonical class coordinates
/// together with the data identifying the group.
struct CohomologyClass {
    size_t source_hash = 0;
    FgModule coefficients;
    int dimension = 0;
    std::vector<mpz_class> coords;

    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }
};

inline size_t complex_hash(const ChainComplex& c) {
    size_t h = 1469598103934665603ull;
    auto mix = [&](const mpz_class& v) {
        h ^= std::hash<std::string>{}(v.get_str());
        h *= 1099511628211ull;
    };
    mix(mpz_class(c.top_degree()));
    for (int k = 0; k <= c.top_degree(); ++k) {
        FgModule t = c.term(k);
        ModuleMap d = c.differential(k);
        mix(mpz_class(t.generators()));
        for (const auto& e : t.relations().entries()) mix(e);
        for (const auto& e : d.matrix().entries()) mix(e);
    }
    return h;
}

/// The cohomology group H^n(X; M) with its class/representative dictionary.
class CohomologyGroup {
public:
    CohomologyGroup(const ChainComplex& x, const FgModule& m, int n)
        : em_(em_object(m, n)), classes_(x, em_.realization), n_(n) {}

    const FgModule& group() const { return classes_.group(); }
    const EMObject& em() const { return em_; }
    const HomotopyClasses& classes() const { return classes_; }
    int dimension() const { return n_; }

    CohomologyClass make_class(const std::vector<mpz_class>& coords) const {
        return {complex_hash(classes_.effective_source()), em_.module, n_, coords};
    }
    CohomologyClass classify(const ChainMap& f) const { return make_class(classes_.classify(f)); }
    ChainMap representative(const CohomologyClass& c) const { return classes_.representative(c.coords); }

private:
    EMObject em_;
    HomotopyClasses classes_;
    int n_;
};

inline FgModule cohomology_group(const ChainComplex& x, const FgModule& m, int n) {
    return CohomologyGroup(x, m, n).group();
}

/// The classifying map of an extension 0 -> J' -> J -> J'' -> 0: a chain map
/// from (a cofibrant model of) E(J'', n) to E(J', n+1) built by lifting the
/// generator surjection through J and restricting to the relation columns.
inline ChainMap extension_classifying_map(const ExtensionClass& ext, int n,
                                          const CohomologyGroup& grp) {
    const RingSpec& rg = ext.sub.ring();
    const ChainComplex& S = grp.classes().effective_source(); // free model of E(J'', n)
    const ChainComplex& T = grp.em().realization;             // E(J', n+1)

    // the quotient map phi : S_n -> J''. Without replacement the degree-n
    // generators are the generators of J''; with a free replacement the
    // comparison map supplies it.
    ExactMatrix want = grp.classes().replacement().has_value()
                           ? grp.classes().replacement()->map.component(n).matrix()
                           : ExactMatrix::identity(rg, ext.quotient.generators());

    // lift phi through the projection J ->> J''
    ExactMatrix sysJ = ExactMatrix::hcat(ext.projection.matrix(), ext.quotient.relations());
    auto lifted = solve(sysJ, want);
    if (!lifted) throw ring_error("extension_classifying_map: projection lift failed");
    ExactMatrix phi_prime = lifted->submatrix(0, 0, ext.total.generators(), want.cols()); // S_n -> J

    // restrict to the boundary columns: phi' o d_{n+1} lands in ker(projection) = J'
    ExactMatrix bd = phi_prime * S.differential(n + 1).matrix();
    ExactMatrix sysI = ExactMatrix::hcat(ext.inclusion.matrix(), ext.total.relations());
    auto factored = solve(sysI, bd);
    if (!factored) throw ring_error("extension_classifying_map: boundary does not factor through the sub");
    ExactMatrix psi = factored->submatrix(0, 0, ext.sub.generators(), bd.cols()); // S_{n+1} -> J'

    // assemble the chain map into the realization of E(J', n+1); over Z the
    // degree-(n+1) term is free on the generators of J', so psi serves as its
    // own lift, and the remaining square is solved into the relation term
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= S.top_degree(); ++k) comps.push_back(ModuleMap::zero(S.term(k), T.term(k)));
    comps[n + 1] = ModuleMap(S.term(n + 1), T.term(n + 1), psi.with_ring(rg), false);
    if (!T.ring().is_mod() && S.top_degree() >= n + 2 && T.top_degree() >= n + 2) {
        ExactMatrix rhs = comps[n + 1].matrix() * S.differential(n + 2).matrix();
        auto l3 = solve(T.differential(n + 2).matrix(), rhs);
        if (!l3) throw ring_error("extension_classifying_map: relation square unsolvable");
        comps[n + 2] = ModuleMap(S.term(n + 2), T.term(n + 2), *l3, false);
    }
    ChainMap out(S, T, comps); // verified
    return out;
}

/// Extension -> cohomology class in H^{n+1}(E(J'', n); J'). Split
/// extensions map to zero.
inline CohomologyClass extension_to_class(const ExtensionClass& ext, int n) {
    if (n < 2) throw ring_error("extension_to_class: stability requires n >= 2");
    ChainComplex source = em_object(ext.quotient, n).realization;
    CohomologyGroup grp(source, ext.sub, n + 1);
    ChainMap psi = extension_classifying_map(ext, n, grp);
    return grp.classify(psi);
}

/// Cohomology class -> extension, via the mapping cocone of a representative:
/// the long exact sequence of the fiber yields 0 -> J' -> H_n(fib) -> J'' -> 0.
inline ExtensionClass class_to_extension(const CohomologyClass& psi, const FgModule& quotient, int n) {
    const FgModule& sub = psi.coefficients;
    ChainComplex source = em_object(quotient, n).realization;
    CohomologyGroup grp(source, sub, n + 1);
    if (psi.dimension != n + 1) throw ring_error("class_to_extension: dimension mismatch");
    ChainMap rep = grp.representative(psi);
    MappingCocone fib = mapping_cocone(rep);
    Subquotient hj = homology_data(fib.fib, n);
    FgModule J = hj.module();

    const ChainComplex& S = rep.source();
    const ChainComplex& T = rep.target();
    const RingSpec& rg = sub.ring();

    // inclusion J' -> J: a cycle y of T in degree n+1 gives the cycle (0, y)
    Subquotient ht = homology_data(T, n + 1);
    EMObject tem{sub, n + 1, T};
    ModuleMap tident = em_identification(tem, ht);
    // invert the identification: generator of J' -> class of H_{n+1}(T)
    ExactMatrix sys = ExactMatrix::hcat(tident.matrix(), sub.relations());
    auto inv = solve(sys, ExactMatrix::identity(rg, sub.generators()));
    if (!inv) throw ring_error("class_to_extension: identification not invertible");
    ExactMatrix incm(rg, J.generators(), sub.generators());
    DirectSum fsum = direct_sum({S.term(n), T.term(n + 1)}, rg);
    for (int j = 0; j < sub.generators(); ++j) {
        std::vector<mpz_class> hcoords(ht.module().generators(), mpz_class(0));
        for (int i = 0; i < ht.module().generators(); ++i) hcoords[i] = inv->at(i, j);
        auto y = ht.rep_from_gen_coords(hcoords);
        // sign: with d(x, y) = (dx, psi x - dy) on the cocone, the class of
        // (0, -y) makes class -> extension -> class the identity
        for (auto& v : y) v = -v;
        auto inj = fsum.inject[1].apply(y);
        auto cls = hj.to_class(inj);
        incm.set_column(j, J.from_canonical_coords(cls));
    }
    ModuleMap inclusion(sub, J, incm);

    // projection J -> J'': project a representative cycle to the S-part and
    // take its homology class under the identification H_n(S) = J''
    Subquotient hsrc = homology_data(S, n);
    EMObject sem{quotient, n, S};
    ModuleMap sident = em_identification(sem, hsrc);
    ExactMatrix prm(rg, quotient.generators(), J.generators());
    for (int j = 0; j < J.generators(); ++j) {
        std::vector<mpz_class> z(J.generators(), mpz_class(0));
        z[j] = 1;
        auto amb = hj.rep_from_gen_coords(z);
        auto spart = fsum.project[0].apply(amb);
        auto cls = hsrc.to_class(spart);
        prm.set_column(j, sident.apply(hsrc.module().from_canonical_coords(cls)));
    }
    ModuleMap projection(J, quotient, prm);

    ExtensionClass out{sub, quotient, J, inclusion, projection};
    out.verify();
    return out;
}

/// Allowability: the classifying class of the extension, composed with the
/// modified k-invariant, vanishes. The composite is realized by the snake
/// construction: lift the representative of khat through the projection of
/// the extension and take the boundary.
inline bool is_allowable(const ExtensionClass& ext, const CohomologyClass& khat,
                         const ChainComplex& khat_source, int n) {
    if (khat.dimension != n + 2)
        throw ring_error("is_allowable: khat must live in cohomological degree n+2");
    // the plumbing composes matrices, so the coefficient module must carry
    // the same presentation as the extension quotient
    if (khat.coefficients.generators() != ext.quotient.generators() ||
        !ModuleMap(khat.coefficients, ext.quotient,
                   ExactMatrix::identity(ext.quotient.ring(), ext.quotient.generators()), false)
             .well_defined())
        throw ring_error("is_allowable: khat coefficients must match the extension quotient presentation");
    if (khat.is_zero()) return true;

    CohomologyGroup grp(khat_source, khat.coefficients, n + 2);
    ChainMap rep = grp.representative(khat); // X -> E(quotient, n+2)
    const ChainComplex& X = rep.source();
    const RingSpec& rg = ext.sub.ring();
    if (X.top_degree() < n + 3) return true; // the composite lives above X

    // realize rep in degree n+2 as a map to the quotient (the realization
    // term generators are the quotient generators in both ring shapes)
    ExactMatrix to_q = rep.component(n + 2).matrix();

    // snake construction of the composite with the classifying map: lift
    // through the projection, then the boundary factors through the sub
    ExactMatrix sysJ = ExactMatrix::hcat(ext.projection.matrix(), ext.quotient.relations());
    auto lifted = solve(sysJ, to_q);
    if (!lifted) throw ring_error("is_allowable: projection lift failed");
    ExactMatrix L = lifted->submatrix(0, 0, ext.total.generators(), to_q.cols()); // X_{n+2} -> J

    ExactMatrix bd = L * X.differential(n + 3).matrix();
    ExactMatrix sysI = ExactMatrix::hcat(ext.inclusion.matrix(), ext.total.relations());
    auto fact = solve(sysI, bd);
    if (!fact) throw ring_error("is_allowable: boundary does not factor through the sub");
    ExactMatrix C = fact->submatrix(0, 0, ext.sub.generators(), bd.cols());

    EMObject target = em_object(ext.sub, n + 3);
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= X.top_degree(); ++k)
        comps.push_back(ModuleMap::zero(X.term(k), target.realization.term(k)));
    comps[n + 3] = ModuleMap(X.term(n + 3), target.realization.term(n + 3), C.with_ring(rg), false);
    if (!rg.is_mod() && X.top_degree() >= n + 4) {
        ExactMatrix rhs = C * X.differential(n + 4).matrix();
        auto l4 = solve(target.realization.differential(n + 4).matrix(), rhs);
        if (!l4) throw ring_error("is_allowable: relation square unsolvable");
        comps[n + 4] = ModuleMap(X.term(n + 4), target.realization.term(n + 4), *l4, false);
    }
    ChainMap composite(X, target.realization, comps);
    return nullhomotopic(composite);
}

} // namespace mtower
