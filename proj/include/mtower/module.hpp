#pragma once

#include "mtower/snf.hpp"

#include <memory>
#include <mutex>
#include <numeric>

namespace mtower {

/// Canonical data of a presented module: coordinate change y = U x on the
/// ambient Z^g under which the relation span becomes diagonal. Over Z the
/// diagonal carries 0 entries for free summands; over Z/m every diagonal
/// entry divides m (the span is augmented by m * I before diagonalizing).
struct CanonicalForm {
    std::vector<mpz_class> diag;     // length = generators
    ExactMatrix U, Uinv;             // over Z
    std::vector<mpz_class> factors;  // nontrivial invariant factors, divisibility chain
    int free_rank = 0;               // Z: zero-diagonal count; Z/m: factors equal to m

    bool operator==(const CanonicalForm& o) const {
        return factors == o.factors && free_rank == o.free_rank;
    }
};

/// Finitely generated module presented as the cokernel of its relations
/// matrix (columns are relators). Immutable after construction; canonical
/// form is computed lazily, at most once, and shared.
class FgModule {
public:
    FgModule() : ring_(RingSpec::integers()), gens_(0), rel_(ring_, 0, 0) {}

    FgModule(RingSpec ring, int generators, ExactMatrix relations)
        : ring_(std::move(ring)), gens_(generators), rel_(std::move(relations)) {
        if (rel_.rows() != gens_) throw ring_error("relations.rows must equal generators");
        require_same_ring(ring_, rel_.ring(), "FgModule");
        state_ = std::make_shared<LazyState>();
    }

    static FgModule zero(const RingSpec& ring) { return FgModule(ring, 0, ExactMatrix(ring, 0, 0)); }

    static FgModule free_module(const RingSpec& ring, int rank) {
        return FgModule(ring, rank, ExactMatrix(ring, rank, 0));
    }

    /// Z/d1 + Z/d2 + ... (+ free summands for zero entries, over Z).
    static FgModule cyclic_sum(const RingSpec& ring, const std::vector<mpz_class>& orders) {
        int n = int(orders.size());
        ExactMatrix rel(ring, n, n);
        for (int i = 0; i < n; ++i) rel.at(i, i) = ring.reduce(orders[i]);
        // drop zero columns over Z so that free summands have no relator
        if (ring.is_integers()) {
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (orders[i] != 0) keep.push_back(i);
            ExactMatrix r2(ring, n, int(keep.size()));
            for (int j = 0; j < int(keep.size()); ++j) r2.at(keep[j], j) = orders[keep[j]];
            return FgModule(ring, n, r2);
        }
        return FgModule(ring, n, rel);
    }

    const RingSpec& ring() const { return ring_; }
    int generators() const { return gens_; }
    const ExactMatrix& relations() const { return rel_; }

    const CanonicalForm& canonical() const {
        std::call_once(state_->once, [this] { state_->canon = compute_canonical(); });
        return state_->canon;
    }

    bool is_zero_module() const {
        const auto& c = canonical();
        return c.factors.empty() && c.free_rank == 0;
    }

    bool isomorphic(const FgModule& o) const {
        return ring_ == o.ring_ && canonical() == o.canonical();
    }

    bool is_finite() const {
        return ring_.is_mod() || canonical().free_rank == 0;
    }

    /// Number of elements; only valid for finite modules.
    mpz_class order() const {
        if (!is_finite()) throw ring_error("order() of infinite module");
        mpz_class n = 1;
        for (const auto& d : canonical().diag) n *= d; // no zero entries when finite
        return n;
    }

    /// Coordinates of an ambient vector in the diagonalized basis, reduced
    /// mod the diagonal. The zero vector of coordinates = the zero element.
    std::vector<mpz_class> to_canonical_coords(const std::vector<mpz_class>& x) const {
        const auto& c = canonical();
        std::vector<mpz_class> y = c.U.apply(x);
        for (int i = 0; i < gens_; ++i)
            if (c.diag[i] != 0) mpz_fdiv_r(y[i].get_mpz_t(), y[i].get_mpz_t(), c.diag[i].get_mpz_t());
        return y;
    }

    std::vector<mpz_class> from_canonical_coords(const std::vector<mpz_class>& y) const {
        const auto& c = canonical();
        std::vector<mpz_class> x = c.Uinv.apply(y);
        for (auto& v : x) v = ring_.reduce(v);
        return x;
    }

    bool element_is_zero(const std::vector<mpz_class>& x) const {
        auto y = to_canonical_coords(x);
        return std::all_of(y.begin(), y.end(), [](const mpz_class& v) { return v == 0; });
    }

    bool elements_equal(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
        std::vector<mpz_class> d(gens_);
        for (int i = 0; i < gens_; ++i) d[i] = a[i] - b[i];
        return element_is_zero(d);
    }

    /// All elements as ambient vectors (finite modules only).
    std::vector<std::vector<mpz_class>> enumerate_elements(size_t cap = 1 << 20) const {
        if (!is_finite()) throw ring_error("unsupported-oracle-input: infinite module");
        const auto& c = canonical();
        std::vector<std::vector<mpz_class>> out;
        std::vector<mpz_class> idx(gens_, mpz_class(0));
        while (true) {
            out.push_back(from_canonical_coords(idx));
            if (out.size() > cap) throw ring_error("module too large to enumerate");
            int i = gens_ - 1;
            for (; i >= 0; --i) {
                idx[i] += 1;
                if (c.diag[i] != 0 && idx[i] >= c.diag[i]) idx[i] = 0;
                else break;
            }
            if (i < 0) break;
        }
        return out;
    }

private:
    struct LazyState {
        std::once_flag once;
        CanonicalForm canon;
    };

    CanonicalForm compute_canonical() const {
        CanonicalForm c;
        SmithForm s = smith(rel_);
        c.U = s.u;
        c.Uinv = s.uinv;
        c.diag.assign(gens_, mpz_class(0));
        for (int i = 0; i < s.rank && i < gens_; ++i) c.diag[i] = s.d.at(i, i);
        if (ring_.is_mod()) {
            // invariant factors of Z^g / (span + m Z^g) are gcd(d_i, m)
            const mpz_class& m = ring_.modulus();
            for (int i = 0; i < gens_; ++i) {
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), c.diag[i].get_mpz_t(), m.get_mpz_t());
                c.diag[i] = g; // gcd(0, m) = m for the free part
            }
        }
        for (int i = 0; i < gens_; ++i) {
            const mpz_class& d = c.diag[i];
            if (d == 0) {
                c.free_rank++;
            } else if (d != 1) {
                c.factors.push_back(d);
            }
        }
        if (ring_.is_mod())
            for (const auto& f : c.factors)
                if (f == ring_.modulus()) c.free_rank++;
        return c;
    }

    RingSpec ring_;
    int gens_;
    ExactMatrix rel_;
    std::shared_ptr<LazyState> state_;
};

/// Map of presented modules, given by its matrix on generators. Construction
/// verifies well-definedness: the image of every source relator must lie in
/// the relation span of the target.
class ModuleMap {
public:
    ModuleMap() = default;

    ModuleMap(FgModule source, FgModule target, ExactMatrix matrix, bool verify = true)
        : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(matrix)) {
        require_same_ring(src_.ring(), tgt_.ring(), "ModuleMap");
        require_same_ring(src_.ring(), m_.ring(), "ModuleMap matrix");
        if (m_.rows() != tgt_.generators() || m_.cols() != src_.generators())
            throw ring_error("ModuleMap: matrix shape must be target gens x source gens");
        if (verify && !well_defined())
            throw ring_error("ModuleMap: matrix does not carry source relations into target relations");
    }

    static ModuleMap zero(const FgModule& s, const FgModule& t) {
        return ModuleMap(s, t, ExactMatrix(s.ring(), t.generators(), s.generators()), false);
    }
    static ModuleMap identity(const FgModule& m) {
        return ModuleMap(m, m, ExactMatrix::identity(m.ring(), m.generators()), false);
    }

    const FgModule& source() const { return src_; }
    const FgModule& target() const { return tgt_; }
    const ExactMatrix& matrix() const { return m_; }

    bool well_defined() const {
        ExactMatrix image = m_ * src_.relations();
        for (int j = 0; j < image.cols(); ++j)
            if (!tgt_.element_is_zero(image.column(j))) return false;
        return true;
    }

    bool is_zero_map() const {
        for (int j = 0; j < m_.cols(); ++j)
            if (!tgt_.element_is_zero(m_.column(j))) return false;
        return true;
    }

    bool equal_map(const ModuleMap& o) const {
        if (src_.generators() != o.src_.generators() || tgt_.generators() != o.tgt_.generators())
            return false;
        ExactMatrix d = m_ - o.m_;
        for (int j = 0; j < d.cols(); ++j)
            if (!tgt_.element_is_zero(d.column(j))) return false;
        return true;
    }

    ModuleMap compose(const ModuleMap& inner) const { // (*this) after inner
        return ModuleMap(inner.src_, tgt_, m_ * inner.m_, false);
    }

    ModuleMap operator+(const ModuleMap& o) const { return ModuleMap(src_, tgt_, m_ + o.m_, false); }
    ModuleMap operator-(const ModuleMap& o) const { return ModuleMap(src_, tgt_, m_ - o.m_, false); }
    ModuleMap operator-() const { return ModuleMap(src_, tgt_, -m_, false); }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const { return m_.apply(x); }

private:
    FgModule src_, tgt_;
    ExactMatrix m_;
};

/// Direct sum with injections and projections.
struct DirectSum {
    FgModule total;
    std::vector<ModuleMap> inject;
    std::vector<ModuleMap> project;
};

inline DirectSum direct_sum(const std::vector<FgModule>& parts, const RingSpec& ring) {
    int g = 0, r = 0;
    for (const auto& p : parts) {
        require_same_ring(p.ring(), ring, "direct_sum");
        g += p.generators();
        r += p.relations().cols();
    }
    ExactMatrix rel(ring, g, r);
    int go = 0, ro = 0;
    for (const auto& p : parts) {
        for (int i = 0; i < p.generators(); ++i)
            for (int j = 0; j < p.relations().cols(); ++j) rel.at(go + i, ro + j) = p.relations().at(i, j);
        go += p.generators();
        ro += p.relations().cols();
    }
    DirectSum out;
    out.total = FgModule(ring, g, rel);
    go = 0;
    for (const auto& p : parts) {
        ExactMatrix in(ring, g, p.generators());
        ExactMatrix pr(ring, p.generators(), g);
        for (int i = 0; i < p.generators(); ++i) {
            in.at(go + i, i) = 1;
            pr.at(i, go + i) = 1;
        }
        out.inject.emplace_back(p, out.total, in, false);
        out.project.emplace_back(out.total, p, pr, false);
        go += p.generators();
    }
    return out;
}

/// A Z/m-module viewed as a Z-module (restriction of scalars).
inline FgModule restrict_to_integers(const FgModule& m) {
    if (m.ring().is_integers()) return m;
    return FgModule(RingSpec::integers(), m.generators(), detail::span_lift(m.relations()));
}

inline ModuleMap restrict_to_integers(const ModuleMap& f) {
    return ModuleMap(restrict_to_integers(f.source()), restrict_to_integers(f.target()),
                     f.matrix().with_ring(RingSpec::integers()), false);
}

/// M (x)_Z Z/p as a Z-module: same generators, relations augmented by p * I.
inline FgModule tensor_with_cyclic(const FgModule& m, const mpz_class& p) {
    if (!m.ring().is_integers()) throw ring_error("tensor_with_cyclic expects a Z-module");
    ExactMatrix pid = ExactMatrix::identity(m.ring(), m.generators()).scaled(p);
    return FgModule(m.ring(), m.generators(), ExactMatrix::hcat(m.relations(), pid));
}

} // namespace mtower
