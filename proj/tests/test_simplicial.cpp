#include <catch2/catch_amalgamated.hpp>

#include "mtower/simplicial.hpp"

#include <random>

using namespace mtower;

namespace {

const RingSpec Z = RingSpec::integers();

FgModule zmod(long n) { return FgModule::cyclic_sum(Z, {mpz_class(n)}); }

ChainComplex random_complex(std::mt19937_64& rng, const RingSpec& rg, int top, int maxrank, int mag) {
    std::vector<int> ranks;
    for (int k = 0; k <= top; ++k) ranks.push_back(int(rng() % (maxrank + 1)));
    std::vector<ExactMatrix> built;
    built.push_back(ExactMatrix(rg, 0, 0));
    for (int k = 1; k <= top; ++k) {
        ExactMatrix prev = (k == 1) ? ExactMatrix(rg, 0, ranks[0]) : built[k - 1];
        ExactMatrix kb = kernel_gens(prev);
        ExactMatrix d(rg, ranks[k - 1], ranks[k]);
        std::uniform_int_distribution<long> coef(-mag, mag);
        for (int j = 0; j < ranks[k]; ++j) {
            std::vector<mpz_class> col(ranks[k - 1], mpz_class(0));
            for (int t = 0; t < kb.cols(); ++t) {
                long a = coef(rng);
                for (int i = 0; i < ranks[k - 1]; ++i) col[i] += a * kb.at(i, t);
            }
            d.set_column(j, col);
        }
        built.push_back(d);
    }
    return ChainComplex::from_matrices(rg, ranks, built);
}

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return int(r);
}

} // namespace

TEST_CASE("constant simplicial modules") {
    FgModule a = zmod(6);
    SimplicialModule c = SimplicialModule::constant(a, 4);
    SECTION("moore chains collapse") {
        MooreComplex mc = moore_complex(c);
        REQUIRE(mc.chains[0].module.isomorphic(a));
        for (int n = 1; n <= 4; ++n) REQUIRE(mc.chains[n].module.is_zero_module());
    }
    SECTION("homotopy groups") {
        REQUIRE(homotopy_groups(c, 0).isomorphic(a));
        for (int n = 1; n <= 3; ++n) REQUIRE(homotopy_groups(c, n).is_zero_module());
    }
    SECTION("matching at n = 1 is the square") {
        MatchingObject mo = matching_object(c, 1);
        REQUIRE(mo.object.isomorphic(direct_sum({a, a}, Z).total));
    }
    SECTION("latching at n = 1 is the module itself") {
        LatchingObject lo = latching_object(c, 1);
        REQUIRE(lo.object.isomorphic(a));
    }
    SECTION("matching at n = 0 is zero") {
        REQUIRE(matching_object(c, 0).object.is_zero_module());
        REQUIRE(latching_object(c, 0).object.is_zero_module());
    }
}

TEST_CASE("dold-kan correspondence") {
    SECTION("sphere in degree 0 is constant") {
        ChainComplex c = ChainComplex::concentrated(FgModule::free_module(Z, 1), 0);
        SimplicialModule g = dold_kan(c, 3);
        for (int n = 0; n <= 3; ++n) REQUIRE(g.level(n).canonical().free_rank == 1);
        g.validate();
    }
    SECTION("level ranks follow surjection counts") {
        for (int k = 0; k <= 3; ++k) {
            ChainComplex c = ChainComplex::concentrated(FgModule::free_module(Z, 1), k);
            SimplicialModule g = dold_kan(c, 4);
            for (int n = 0; n <= 4; ++n) {
                // monotone surjections [n] ->> [k] are counted by C(n, k)
                REQUIRE(g.level(n).generators() == binomial(n, k));
            }
        }
    }
    SECTION("normalization recovers the complex exactly") {
        std::mt19937_64 rng(2024);
        for (int t = 0; t < 12; ++t) {
            ChainComplex c = random_complex(rng, Z, 3, 2, 2);
            SimplicialModule g = dold_kan(c, 4);
            g.validate();
            MooreComplex mc = moore_complex(g);
            for (int n = 0; n <= 4; ++n) {
                ModuleMap inc = dold_kan_inclusion(c, g, n);
                // the canonical summand inclusion lands in the chains and is
                // an isomorphism onto them
                ModuleMap into_chains = corestrict(mc.chains[n].inclusion, inc);
                auto parts = map_subquotients(into_chains);
                REQUIRE(parts.kernel.module.is_zero_module());
                REQUIRE(parts.cokernel.module.is_zero_module());
                // and it intertwines the differentials
                if (n >= 1) {
                    ModuleMap lhs = mc.normalized.differential(n).compose(into_chains);
                    ModuleMap rhs = corestrict(mc.chains[n - 1].inclusion, dold_kan_inclusion(c, g, n - 1))
                                        .compose(c.differential(n));
                    REQUIRE(lhs.equal_map(rhs));
                }
            }
        }
    }
    SECTION("homotopy groups match homology") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 8; ++t) {
            ChainComplex c = random_complex(rng, Z, 3, 2, 2);
            SimplicialModule g = dold_kan(c, 4);
            for (int n = 0; n <= 3; ++n) REQUIRE(homotopy_groups(g, n).isomorphic(homology(c, n)));
        }
    }
    SECTION("over Z/4 as well") {
        std::mt19937_64 rng(12);
        RingSpec r4 = RingSpec::integers_mod(4);
        ChainComplex c = random_complex(rng, r4, 2, 2, 3);
        SimplicialModule g = dold_kan(c, 3);
        g.validate();
        for (int n = 0; n <= 2; ++n) REQUIRE(homotopy_groups(g, n).isomorphic(homology(c, n)));
    }
}

TEST_CASE("moore complex structure") {
    std::mt19937_64 rng(500);
    ChainComplex c = random_complex(rng, Z, 3, 2, 2);
    SimplicialModule g = dold_kan(c, 4);
    MooreComplex mc = moore_complex(g);
    SECTION("d0 carries chains into cycles") {
        for (int n = 1; n <= 4; ++n) {
            // d0(C_n) has all faces zero in level n-1
            ModuleMap img = g.face(n, 0).compose(mc.chains[n].inclusion);
            ModuleMap into_cycles = corestrict(mc.cycles[n - 1].inclusion, img);
            (void)into_cycles; // corestriction succeeding is the containment
            SUCCEED();
        }
    }
    SECTION("exactness C_{n+1} -> Z_n -> pi_n -> 0") {
        for (int n = 0; n <= 3; ++n) {
            ModuleMap d0 = corestrict(mc.cycles[n].inclusion, g.face(n + 1, 0).compose(mc.chains[n + 1].inclusion));
            auto parts = map_subquotients(d0);
            REQUIRE(parts.cokernel.module.isomorphic(homotopy_groups(g, n)));
        }
    }
    SECTION("chains projector projects onto the chains") {
        for (int n = 1; n <= 4; ++n) {
            ModuleMap e = chains_projector(g, n);
            // idempotent
            REQUIRE(e.compose(e).equal_map(e));
            // kills the positive faces
            for (int i = 1; i <= n; ++i)
                REQUIRE(g.face(n, i).compose(e).is_zero_map());
            // fixes the chains
            ModuleMap fix = e.compose(mc.chains[n].inclusion);
            REQUIRE(fix.equal_map(mc.chains[n].inclusion));
        }
    }
}

TEST_CASE("matching and latching objects") {
    std::mt19937_64 rng(901);
    ChainComplex c = random_complex(rng, Z, 3, 2, 2);
    SimplicialModule g = dold_kan(c, 4);
    SECTION("every face factors through delta") {
        for (int n = 1; n <= 4; ++n) {
            MatchingObject mo = matching_object(g, n);
            for (int i = 0; i <= n; ++i) {
                ModuleMap through = mo.product.project[i].compose(mo.inclusion).compose(mo.delta);
                REQUIRE(through.equal_map(g.face(n, i)));
            }
        }
    }
    SECTION("delta is onto for constant modules in degrees >= 2") {
        // at n = 1 the matching object is the full square X_0 x X_0 and
        // delta is the diagonal, so surjectivity starts at n = 2
        SimplicialModule k = SimplicialModule::constant(zmod(6), 3);
        for (int n = 2; n <= 3; ++n) {
            MatchingObject mo = matching_object(k, n);
            REQUIRE(map_subquotients(mo.delta).cokernel.module.is_zero_module());
        }
    }
    SECTION("latching complement is the chains summand") {
        for (int n = 1; n <= 4; ++n) {
            LatchingObject lo = latching_object(g, n);
            MooreComplex mc = moore_complex(g);
            auto im = map_subquotients(lo.sigma).image;
            // image of sigma + chains = everything, and they meet trivially:
            // check by a rank/order count of the cokernel of [sigma | chains]
            ExactMatrix both = ExactMatrix::hcat(lo.sigma.matrix(), mc.chains[n].inclusion.matrix());
            FgModule cover(Z, g.level(n).generators(),
                           ExactMatrix::hcat(g.level(n).relations(), both));
            REQUIRE(cover.is_zero_module());
        }
    }
}

TEST_CASE("simplicial postnikov sections") {
    SECTION("constant module is its own section") {
        FgModule a = zmod(4);
        SimplicialModule c = SimplicialModule::constant(a, 4);
        for (int n = 0; n <= 2; ++n) {
            auto sec = postnikov_section_simplicial(c, n);
            REQUIRE(homotopy_groups(sec.p, 0).isomorphic(a));
            for (int k = 1; k <= sec.p.truncation_level() - 1; ++k)
                REQUIRE(homotopy_groups(sec.p, k).is_zero_module());
        }
    }
    SECTION("postnikov axioms through dold-kan") {
        std::mt19937_64 rng(77);
        for (int t = 0; t < 6; ++t) {
            ChainComplex c = random_complex(rng, Z, 3, 2, 2);
            SimplicialModule g = dold_kan(c, 4);
            int n = int(rng() % 2);
            auto sec = postnikov_section_simplicial(g, n);
            for (int k = 0; k <= n; ++k)
                REQUIRE(homotopy_groups(sec.p, k).isomorphic(homotopy_groups(g, k)));
            for (int k = n + 1; k <= sec.p.truncation_level() - 1; ++k)
                REQUIRE(homotopy_groups(sec.p, k).is_zero_module());
        }
    }
    SECTION("idempotence up to canonical forms") {
        std::mt19937_64 rng(78);
        ChainComplex c = random_complex(rng, Z, 2, 2, 2);
        SimplicialModule g = dold_kan(c, 3);
        auto once = postnikov_section_simplicial(g, 1);
        auto twice = postnikov_section_simplicial(once.p, 1);
        for (int k = 0; k <= 2; ++k)
            REQUIRE(homotopy_groups(once.p, k).isomorphic(homotopy_groups(twice.p, k)));
    }
    SECTION("insufficient truncation is refused") {
        SimplicialModule c = SimplicialModule::constant(zmod(2), 2);
        REQUIRE_THROWS_AS(postnikov_section_simplicial(c, 1), ring_error);
    }
}

TEST_CASE("naturality of moore complex under levelwise isomorphism") {
    std::mt19937_64 rng(5001);
    ChainComplex c = random_complex(rng, Z, 3, 2, 2);
    SimplicialModule g = dold_kan(c, 4);
    // conjugate by random unimodular levelwise base changes
    std::vector<ExactMatrix> Q, Qinv;
    for (int n = 0; n <= 4; ++n) {
        int gn = g.level(n).generators();
        ExactMatrix q = ExactMatrix::identity(Z, gn);
        std::uniform_int_distribution<long> coef(-1, 1);
        for (int rep = 0; rep < 2 * gn; ++rep) {
            int a = int(rng() % std::max(1, gn)), b = int(rng() % std::max(1, gn));
            if (a == b || gn == 0) continue;
            detail::row_add(q, a, b, mpz_class(coef(rng)));
        }
        Q.push_back(q);
        SmithForm s = smith(q);
        Qinv.push_back(s.v * s.d.transpose() * s.u); // unused; recompute below properly
    }
    std::vector<FgModule> levels;
    std::vector<std::vector<ModuleMap>> faces(5), degens(5);
    for (int n = 0; n <= 4; ++n) levels.push_back(g.level(n));
    for (int n = 1; n <= 4; ++n)
        for (int i = 0; i <= n; ++i) {
            // conjugated face: Q_{n-1} d_i Q_n^{-1}; use solve for the inverse action
            auto inv = integer_solve(Q[n], ExactMatrix::identity(Z, Q[n].rows()));
            REQUIRE(inv.has_value());
            faces[n].emplace_back(levels[n], levels[n - 1], Q[n - 1] * g.face(n, i).matrix() * *inv, false);
        }
    for (int n = 0; n < 4; ++n)
        for (int j = 0; j <= n; ++j) {
            auto inv = integer_solve(Q[n], ExactMatrix::identity(Z, Q[n].rows()));
            degens[n].emplace_back(levels[n], levels[n + 1], Q[n + 1] * g.degeneracy(n, j).matrix() * *inv, false);
        }
    SimplicialModule h(Z, levels, faces, degens);
    for (int n = 0; n <= 3; ++n) REQUIRE(homotopy_groups(h, n).isomorphic(homotopy_groups(g, n)));
}
