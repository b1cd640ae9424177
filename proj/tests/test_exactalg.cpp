#include <catch2/catch_amalgamated.hpp>

#include "mtower/extensions.hpp"
#include "mtower/subquotient.hpp"

#include <random>

using namespace mtower;

namespace {

const RingSpec Z = RingSpec::integers();

ExactMatrix random_matrix(std::mt19937_64& rng, const RingSpec& rg, int rows, int cols, int mag) {
    std::uniform_int_distribution<long> d(-mag, mag);
    ExactMatrix m(rg, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = rg.reduce(mpz_class(d(rng)));
    return m;
}

// independent oracle: invariant factors via gcds of k x k minors
std::vector<mpz_class> minor_gcd_invariant_factors(const ExactMatrix& m) {
    int r = m.rows(), c = m.cols();
    int n = std::min(r, c);
    std::vector<mpz_class> dk(n + 1);
    dk[0] = 1;
    for (int k = 1; k <= n; ++k) {
        std::vector<int> ri(k), ci(k);
        mpz_class g = 0;
        std::function<void(int, int)> rows_rec = [&](int start, int depth) {
            if (depth == k) {
                std::function<void(int, int)> cols_rec = [&](int cstart, int cdepth) {
                    if (cdepth == k) {
                        ExactMatrix sub(RingSpec::integers(), k, k);
                        for (int a = 0; a < k; ++a)
                            for (int b = 0; b < k; ++b) sub.at(a, b) = m.at(ri[a], ci[b]);
                        mpz_class det = sub.det();
                        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
                        return;
                    }
                    for (int j = cstart; j < c; ++j) { ci[cdepth] = j; cols_rec(j + 1, cdepth + 1); }
                };
                cols_rec(0, 0);
                return;
            }
            for (int i = start; i < r; ++i) { ri[depth] = i; rows_rec(i + 1, depth + 1); }
        };
        rows_rec(0, 0);
        dk[k] = g;
    }
    std::vector<mpz_class> out;
    for (int k = 1; k <= n; ++k) {
        if (dk[k] == 0) break;
        mpz_class f;
        mpz_divexact(f.get_mpz_t(), dk[k].get_mpz_t(), dk[k - 1].get_mpz_t());
        out.push_back(f);
    }
    return out;
}

FgModule zmod(long n) { return FgModule::cyclic_sum(Z, {mpz_class(n)}); }

} // namespace

TEST_CASE("smith normal form basics") {
    SECTION("worked 2x2 example") {
        ExactMatrix m = ExactMatrix::from_rows(Z, {{2, 4}, {6, 8}});
        SmithForm s = smith_normal_form(m);
        REQUIRE(s.d.at(0, 0) == 2);
        REQUIRE(s.d.at(1, 1) == 4);
        REQUIRE(s.u * m * s.v == s.d);
        auto oracle = minor_gcd_invariant_factors(m);
        REQUIRE(oracle == std::vector<mpz_class>{2, 4});
    }
    SECTION("zero matrix") {
        ExactMatrix m(Z, 3, 2);
        SmithForm s = smith_normal_form(m);
        REQUIRE(s.d.is_zero());
        REQUIRE(s.u == ExactMatrix::identity(Z, 3));
        REQUIRE(s.v == ExactMatrix::identity(Z, 2));
    }
    SECTION("identity") {
        ExactMatrix m = ExactMatrix::identity(Z, 4);
        SmithForm s = smith_normal_form(m);
        REQUIRE(s.d == m);
    }
}

TEST_CASE("smith normal form properties on random matrices") {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + int(rng() % 8), c = 1 + int(rng() % 8);
        ExactMatrix m = random_matrix(rng, Z, r, c, 20);
        SmithForm s = smith_normal_form(m);
        REQUIRE(s.u * m * s.v == s.d);
        mpz_class du = s.u.det(), dv = s.v.det();
        REQUIRE((du == 1 || du == -1));
        REQUIRE((dv == 1 || dv == -1));
        REQUIRE(s.u * s.uinv == ExactMatrix::identity(Z, r));
        REQUIRE(s.v * s.vinv == ExactMatrix::identity(Z, c));
        auto diag = s.diagonal();
        for (int i = 0; i + 1 < int(diag.size()); ++i) {
            if (diag[i + 1] == 0) continue;
            REQUIRE(diag[i] != 0);
            REQUIRE(mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()));
        }
        if (r <= 5 && c <= 5) {
            auto oracle = minor_gcd_invariant_factors(m);
            std::vector<mpz_class> got;
            for (auto& d : diag)
                if (d != 0) got.push_back(d);
            REQUIRE(got == oracle);
        }
    }
}

TEST_CASE("smith normal form over Z/m") {
    RingSpec r4 = RingSpec::integers_mod(4);
    ExactMatrix m = ExactMatrix::from_rows(r4, {{2, 1}, {3, 2}});
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.u * m * s.v == s.d);
    REQUIRE(r4.is_unit(s.u.det()));
    REQUIRE(r4.is_unit(s.v.det()));
}

TEST_CASE("module_from_presentation canonical forms") {
    SECTION("single relator 2 gives Z/2") {
        FgModule m(Z, 1, ExactMatrix::from_rows(Z, {{2}}));
        REQUIRE(m.canonical().factors == std::vector<mpz_class>{2});
        REQUIRE(m.canonical().free_rank == 0);
    }
    SECTION("no relations gives free rank 2") {
        FgModule m = FgModule::free_module(Z, 2);
        REQUIRE(m.canonical().free_rank == 2);
        REQUIRE(m.canonical().factors.empty());
    }
    SECTION("diag(2,3) is Z/6") {
        FgModule m(Z, 2, ExactMatrix::from_rows(Z, {{2, 0}, {0, 3}}));
        REQUIRE(m.canonical().factors == std::vector<mpz_class>{6});
        // oracle: SNF of the presentation is diag(1, 6)
        auto oracle = minor_gcd_invariant_factors(m.relations());
        REQUIRE(oracle == std::vector<mpz_class>{1, 6});
    }
    SECTION("shuffled presentations agree") {
        std::mt19937_64 rng(77);
        for (int t = 0; t < 30; ++t) {
            int g = 1 + int(rng() % 4), r = int(rng() % 5);
            ExactMatrix rel = random_matrix(rng, Z, g, r, 6);
            FgModule a(Z, g, rel);
            // shuffle rows and columns
            ExactMatrix rel2 = rel;
            for (int i = 0; i < g; ++i) detail::row_swap(rel2, i, int(rng() % g));
            for (int j = 0; j < r; ++j) detail::col_swap(rel2, j, r ? int(rng() % r) : 0);
            FgModule b(Z, g, rel2);
            REQUIRE(a.isomorphic(b));
        }
    }
    SECTION("Z/m canonical forms divide the modulus") {
        RingSpec r12 = RingSpec::integers_mod(12);
        FgModule m(r12, 2, ExactMatrix::from_rows(r12, {{8, 2}, {0, 6}}));
        for (auto& f : m.canonical().factors)
            REQUIRE(mpz_divisible_p(mpz_class(12).get_mpz_t(), f.get_mpz_t()));
    }
}

TEST_CASE("map subquotients") {
    SECTION("times 2 on Z") {
        FgModule z = FgModule::free_module(Z, 1);
        ModuleMap f(z, z, ExactMatrix::from_rows(Z, {{2}}));
        auto parts = map_subquotients(f);
        REQUIRE(parts.kernel.module.is_zero_module());
        REQUIRE(parts.image.module.canonical().free_rank == 1);
        REQUIRE(parts.cokernel.module.canonical().factors == std::vector<mpz_class>{2});
    }
    SECTION("times 2 on Z/4") {
        FgModule m = zmod(4);
        ModuleMap f(m, m, ExactMatrix::from_rows(Z, {{2}}));
        auto parts = map_subquotients(f);
        // oracle by enumeration: kernel {0,2}, image {0,2}, cokernel of order 2
        int in_kernel = 0;
        for (auto& e : m.enumerate_elements()) {
            auto img = f.apply(e);
            if (m.element_is_zero(img)) ++in_kernel;
        }
        REQUIRE(in_kernel == 2);
        REQUIRE(parts.kernel.module.order() == 2);
        REQUIRE(parts.image.module.order() == 2);
        REQUIRE(parts.cokernel.module.order() == 2);
    }
    SECTION("zero map") {
        FgModule a = zmod(6);
        FgModule b = FgModule::free_module(Z, 2);
        ModuleMap f = ModuleMap::zero(a, b);
        auto parts = map_subquotients(f);
        REQUIRE(parts.kernel.module.isomorphic(a));
        REQUIRE(parts.cokernel.module.isomorphic(b));
    }
    SECTION("exactness and order bookkeeping on random maps") {
        std::mt19937_64 rng(4242);
        int done = 0;
        while (done < 25) {
            int ga = 1 + int(rng() % 3), gb = 1 + int(rng() % 3);
            ExactMatrix ra = random_matrix(rng, Z, ga, ga, 4);
            ExactMatrix rb = random_matrix(rng, Z, gb, gb, 4);
            FgModule a(Z, ga, ra), b(Z, gb, rb);
            if (!a.is_finite() || !b.is_finite()) continue;
            ExactMatrix cand = random_matrix(rng, Z, gb, ga, 4);
            ModuleMap f(a, b, cand, false);
            if (!f.well_defined()) continue;
            ++done;
            auto parts = map_subquotients(f);
            REQUIRE(parts.kernel.module.order() * parts.image.module.order() == a.order());
            REQUIRE(parts.image.module.order() * parts.cokernel.module.order() == b.order());
            // the witnessing maps compose correctly
            ModuleMap through = f.compose(parts.kernel.inclusion);
            REQUIRE(through.is_zero_map());
            REQUIRE(parts.cokernel.projection.compose(parts.image.inclusion).is_zero_map());
        }
    }
}

TEST_CASE("hom and ext") {
    SECTION("free source has no ext") {
        FgModule z = FgModule::free_module(Z, 1);
        FgModule b = zmod(6);
        auto he = hom_and_ext(z, b);
        REQUIRE(he.ext1.is_zero_module());
        REQUIRE(he.hom.isomorphic(b));
    }
    SECTION("ext1(Z/n, Z) = Z/n") {
        auto he = hom_and_ext(zmod(6), FgModule::free_module(Z, 1));
        REQUIRE(he.hom.is_zero_module());
        REQUIRE(he.ext1.canonical().factors == std::vector<mpz_class>{6});
    }
    SECTION("hom and ext of Z/2 into Z/4") {
        auto he = hom_and_ext(zmod(2), zmod(4));
        // oracle: enumerate homomorphisms Z/2 -> Z/4 directly
        FgModule a = zmod(2), b = zmod(4);
        int homs = 0;
        for (auto& e : b.enumerate_elements()) {
            std::vector<mpz_class> twice = {2 * e[0]};
            if (b.element_is_zero(twice)) ++homs;
        }
        REQUIRE(homs == 2);
        REQUIRE(he.hom.order() == 2);
        REQUIRE(he.ext1.order() == 2);
    }
    SECTION("redundant relators do not inflate ext") {
        FgModule a(Z, 1, ExactMatrix::from_rows(Z, {{2, 0}}));
        auto he = hom_and_ext(a, FgModule::free_module(Z, 1));
        REQUIRE(he.ext1.canonical().factors == std::vector<mpz_class>{2});
    }
}

TEST_CASE("tor1") {
    REQUIRE(tor1(FgModule::free_module(Z, 2), zmod(4)).is_zero_module());
    REQUIRE(tor1(zmod(4), zmod(6)).canonical().factors == std::vector<mpz_class>{2});
    REQUIRE(tor1(zmod(2), zmod(2)).canonical().factors == std::vector<mpz_class>{2});
    // oracle: Tor(Z/a, Z/b) = Z/gcd(a,b), via the kernel of the tensored presentation
    std::mt19937_64 rng(99);
    for (int t = 0; t < 10; ++t) {
        long a = 2 + long(rng() % 6), b = 2 + long(rng() % 6);
        FgModule ta = zmod(a);
        FgModule tens = tensor_with_cyclic(ta, mpz_class(b)); // (Z/a) (x) Z/b presented directly
        ModuleMap mult(FgModule::free_module(Z, 1), FgModule::free_module(Z, 1),
                       ExactMatrix::from_rows(Z, {{long(a)}}), false);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), mpz_class(a).get_mpz_t(), mpz_class(b).get_mpz_t());
        FgModule got = tor1(ta, zmod(b));
        REQUIRE(got.order() == g);
    }
}

TEST_CASE("extension enumeration oracle") {
    SECTION("Z/2 by Z/2 gives split and Z/4") {
        auto classes = enumerate_extensions(zmod(2), zmod(2));
        REQUIRE(classes.size() == 2);
        bool saw_split = false, saw_z4 = false;
        for (auto& c : classes) {
            if (c.total.isomorphic(FgModule::cyclic_sum(Z, {mpz_class(2), mpz_class(2)}))) saw_split = true;
            if (c.total.isomorphic(zmod(4))) saw_z4 = true;
        }
        REQUIRE(saw_split);
        REQUIRE(saw_z4);
    }
    SECTION("zero sub") {
        auto classes = enumerate_extensions(zmod(5), FgModule::zero(Z));
        REQUIRE(classes.size() == 1);
    }
    SECTION("coprime orders force split") {
        auto classes = enumerate_extensions(zmod(2), zmod(3));
        REQUIRE(classes.size() == 1);
        REQUIRE(classes[0].total.isomorphic(zmod(6)));
    }
    SECTION("counts match ext1 over the test family") {
        std::vector<FgModule> family = {zmod(2), zmod(3), zmod(4),
                                        FgModule::cyclic_sum(Z, {mpz_class(2), mpz_class(2)})};
        for (auto& q : family)
            for (auto& s : family) {
                auto classes = enumerate_extensions(q, s);
                FgModule e = hom_and_ext(q, s).ext1;
                REQUIRE(mpz_class(classes.size()) == e.order());
            }
    }
    SECTION("infinite input rejected") {
        REQUIRE_THROWS_AS(enumerate_extensions(FgModule::free_module(Z, 1), zmod(2)), ring_error);
    }
}
