#pragma once

#include "mtower/module.hpp"

namespace mtower {

struct KernelData {
    FgModule module;
    ModuleMap inclusion; // into the source of f
};
struct ImageData {
    FgModule module;
    ModuleMap inclusion; // into the target of f
};
struct CokernelData {
    FgModule module;
    ModuleMap projection; // from the target of f
};

struct SubquotientsOfMap {
    KernelData kernel;
    ImageData image;
    CokernelData cokernel;
};

/// Kernel, image and cokernel of a map of presented modules, each with its
/// witnessing map. Exactness (image = source/kernel, cokernel = target/image)
/// holds by construction of the presentations.
inline SubquotientsOfMap map_subquotients(const ModuleMap& f) {
    const FgModule& A = f.source();
    const FgModule& B = f.target();
    const RingSpec& rg = A.ring();

    // kernel: generated by preimages of the relation span of B
    ExactMatrix K = preimage_gens(f.matrix(), B.relations());
    FgModule ker(rg, K.cols(), preimage_gens(K, A.relations()));
    ModuleMap ker_inc(ker, A, K, false);

    // image: presented on the generators of A, with the kernel preimages as relators
    FgModule img(rg, A.generators(), K);
    ModuleMap img_inc(img, B, f.matrix(), false);

    // cokernel: target generators, relations of B plus columns of f
    FgModule coker(rg, B.generators(), ExactMatrix::hcat(B.relations(), f.matrix()));
    ModuleMap proj(B, coker, ExactMatrix::identity(rg, B.generators()), false);

    return {{ker, ker_inc}, {img, img_inc}, {coker, proj}};
}

/// A subquotient ker(g)/im(f) of the middle module B of a composable pair
/// f: A -> B, g: B -> C with g o f = 0, together with coordinates:
/// to_class takes an ambient vector of B lying in ker(g) to class coordinates,
/// from_class returns an ambient representative.
class Subquotient {
public:
    Subquotient() = default;

    Subquotient(const ModuleMap& f, const ModuleMap& g) {
        require_same_ring(f.source().ring(), g.target().ring(), "Subquotient");
        if (f.target().generators() != g.source().generators())
            throw ring_error("Subquotient: maps not composable");
        if (!g.compose(f).is_zero_map()) throw ring_error("Subquotient: g o f != 0");
        build(f.target(), g, f.matrix());
    }

    /// ker(g) / (subspan) for an explicit extra span matrix (may be empty).
    Subquotient(const FgModule& B, const ModuleMap& g, const ExactMatrix& extra_span) {
        build(B, g, extra_span);
    }

    const FgModule& module() const { return H_; }
    const FgModule& ambient() const { return B_; }
    const ExactMatrix& cycle_gens() const { return K_; }

    /// Class coordinates of a cycle (an ambient vector of B with g(x) = 0).
    std::vector<mpz_class> to_class(const std::vector<mpz_class>& x) const {
        ExactMatrix rhs(B_.ring(), B_.generators(), 1);
        rhs.set_column(0, x);
        ExactMatrix sys = ExactMatrix::hcat(K_, B_.relations());
        auto sol = solve(sys, rhs);
        if (!sol) throw ring_error("to_class: vector is not a cycle of the subquotient");
        std::vector<mpz_class> z(K_.cols());
        for (int i = 0; i < K_.cols(); ++i) z[i] = sol->at(i, 0);
        return H_.to_canonical_coords(z);
    }

    /// Ambient representative of a class given in canonical coordinates.
    std::vector<mpz_class> rep_from_class(const std::vector<mpz_class>& y) const {
        return K_.apply(H_.from_canonical_coords(y));
    }

    /// Ambient representative from generator coordinates of the subquotient.
    std::vector<mpz_class> rep_from_gen_coords(const std::vector<mpz_class>& z) const {
        return K_.apply(z);
    }

private:
    void build(const FgModule& B, const ModuleMap& g, const ExactMatrix& extra_span) {
        B_ = B;
        K_ = preimage_gens(g.matrix(), g.target().relations());
        ExactMatrix span = ExactMatrix::hcat(B.relations(), extra_span);
        H_ = FgModule(B.ring(), K_.cols(), preimage_gens(K_, span));
    }

    FgModule B_;
    ExactMatrix K_;
    FgModule H_;
};

/// Hom(A, B) as a presented module. Elements are matrices (target gens x
/// source gens); the module sits inside B^{gA} as the kernel of the
/// relations-of-A constraint.
struct HomModule {
    FgModule module;          // presented on its own generators
    ExactMatrix gens;         // (gB*gA) x (module gens): ambient columns, matrix entries column-major by source generator
    FgModule ambient;         // B^{gA}
    int gA = 0, gB = 0;

    ModuleMap decode(const FgModule& A, const FgModule& B, const std::vector<mpz_class>& coords) const {
        std::vector<mpz_class> v = gens.apply(coords);
        ExactMatrix m(B.ring(), gB, gA);
        for (int j = 0; j < gA; ++j)
            for (int i = 0; i < gB; ++i) m.at(i, j) = v[size_t(j) * gB + i];
        return ModuleMap(A, B, m, false);
    }

    std::vector<mpz_class> encode(const ModuleMap& f) const {
        std::vector<mpz_class> v(size_t(gA) * gB);
        for (int j = 0; j < gA; ++j)
            for (int i = 0; i < gB; ++i) v[size_t(j) * gB + i] = f.matrix().at(i, j);
        ExactMatrix rhs(ambient.ring(), ambient.generators(), 1);
        rhs.set_column(0, v);
        ExactMatrix sys = ExactMatrix::hcat(gens, ambient.relations());
        auto sol = solve(sys, rhs);
        if (!sol) throw ring_error("HomModule::encode: map is not in the Hom module");
        std::vector<mpz_class> z(gens.cols());
        for (int i = 0; i < gens.cols(); ++i) z[i] = sol->at(i, 0);
        return z;
    }
};

inline HomModule hom_module(const FgModule& A, const FgModule& B) {
    require_same_ring(A.ring(), B.ring(), "hom_module");
    const RingSpec& rg = A.ring();
    int gA = A.generators(), gB = B.generators();
    auto powerB = [&](int k) {
        std::vector<FgModule> parts(k, B);
        return direct_sum(parts, rg).total;
    };
    FgModule amb = powerB(gA);
    int rA = A.relations().cols();
    HomModule out;
    out.gA = gA;
    out.gB = gB;
    out.ambient = amb;
    if (rA == 0) {
        out.module = amb;
        out.gens = ExactMatrix::identity(rg, amb.generators());
        return out;
    }
    // constraint: h * rel_A = 0 in B^{rA}; on stacked coordinates the map is rel_A^T (x) I_gB
    ExactMatrix phi = ExactMatrix::kron_identity(A.relations().transpose(), gB);
    FgModule target = powerB(rA);
    ModuleMap phi_map(amb, target, phi, false);
    auto parts = map_subquotients(phi_map);
    out.module = parts.kernel.module;
    out.gens = parts.kernel.inclusion.matrix();
    return out;
}

struct HomExtResult {
    FgModule hom;
    FgModule ext1;
};

/// Hom and Ext^1 from a presentation of a: with F2 -> F1 -> F0 -> a -> 0
/// (F2 the syzygies of the relations), hom = ker and ext1 = the homology of
/// the induced maps on Hom(F_, b) = b^{rank}.
inline HomExtResult hom_and_ext(const FgModule& a, const FgModule& b) {
    require_same_ring(a.ring(), b.ring(), "hom_and_ext");
    const RingSpec& rg = a.ring();
    ExactMatrix R1 = a.relations();
    if (rg.is_integers()) {
        // basis of the relation lattice: independent columns, no syzygies
        SmithForm s = smith(R1);
        ExactMatrix basis(rg, a.generators(), s.rank);
        ExactMatrix ud = s.uinv * s.d;
        for (int j = 0; j < s.rank; ++j)
            for (int i = 0; i < a.generators(); ++i) basis.at(i, j) = ud.at(i, j);
        R1 = basis;
    }
    ExactMatrix R2 = kernel_gens(R1);

    auto powerB = [&](int k) {
        std::vector<FgModule> parts(k, b);
        return direct_sum(parts, rg).total;
    };
    int gb = b.generators();
    FgModule H0 = powerB(a.generators());
    FgModule H1 = powerB(R1.cols());
    FgModule H2 = powerB(R2.cols());
    ModuleMap d1(H0, H1, ExactMatrix::kron_identity(R1.transpose(), gb), false);
    ModuleMap d2(H1, H2, ExactMatrix::kron_identity(R2.transpose(), gb), false);

    HomExtResult out;
    out.hom = map_subquotients(d1).kernel.module;
    out.ext1 = Subquotient(d1, d2).module();
    return out;
}

/// Tor_1(a, b) = homology of F2 (x) b -> F1 (x) b -> F0 (x) b at the middle.
inline FgModule tor1(const FgModule& a, const FgModule& b) {
    require_same_ring(a.ring(), b.ring(), "tor1");
    const RingSpec& rg = a.ring();
    ExactMatrix R1 = a.relations();
    if (rg.is_integers()) {
        SmithForm s = smith(R1);
        ExactMatrix basis(rg, a.generators(), s.rank);
        ExactMatrix ud = s.uinv * s.d;
        for (int j = 0; j < s.rank; ++j)
            for (int i = 0; i < a.generators(); ++i) basis.at(i, j) = ud.at(i, j);
        R1 = basis;
    }
    ExactMatrix R2 = kernel_gens(R1);
    auto powerB = [&](int k) {
        std::vector<FgModule> parts(k, b);
        return direct_sum(parts, rg).total;
    };
    int gb = b.generators();
    FgModule T2 = powerB(R2.cols());
    FgModule T1 = powerB(R1.cols());
    FgModule T0 = powerB(a.generators());
    ModuleMap m2(T2, T1, ExactMatrix::kron_identity(R2, gb), false);
    ModuleMap m1(T1, T0, ExactMatrix::kron_identity(R1, gb), false);
    return Subquotient(m2, m1).module();
}

} // namespace mtower
