#include <doctest.h>

#include <random>

#include "sofic/error.hpp"
#include "sofic/finite_group.hpp"
#include "support.hpp"

using namespace sofic;
using namespace sofic::test;

namespace {
  // Brute-force intersection of all conjugates gHg^-1.
  std::vector<Element> core_by_conjugates(Subgroup const& h) {
    auto const&          g = *h.parent();
    std::vector<Element> out;
    for (Element x : h.elements()) {
      bool in_all = true;
      for (Element y = 0; y < g.order() && in_all; ++y) {
        // x in yHy^-1 iff y^-1 x y in H
        in_all = h.contains(g.mul(g.mul(g.inv(y), x), y));
      }
      if (in_all) {
        out.push_back(x);
      }
    }
    return out;
  }

  std::size_t cycles_of_length(Permutation const& p, std::size_t len) {
    std::vector<bool> seen(p.degree());
    std::size_t       count = 0;
    for (Point x = 0; x < p.degree(); ++x) {
      if (seen[x]) {
        continue;
      }
      std::size_t n = 0;
      for (Point y = x; !seen[y]; y = p(y)) {
        seen[y] = true;
        ++n;
      }
      count += n == len;
    }
    return count;
  }
}  // namespace

TEST_SUITE("finite-groups") {
  TEST_CASE("closure from permutation generators") {
    CHECK(perm_group({{1, 0}}, 2).group->order() == 2);
    CHECK(perm_group({}, 4).group->order() == 1);
    auto s = perm_group({{1, 0, 2}, {1, 2, 0}}, 3);
    CHECK(s.group->order() == closure_size({{1, 0, 2}, {1, 2, 0}}, 3));
    CHECK(s.group->order() == 6);
    CHECK(s.elements[0].is_identity());
    // faithful images multiply like the table
    for (Element a = 0; a < 6; ++a) {
      for (Element b = 0; b < 6; ++b) {
        CHECK(s.elements[s.group->mul(a, b)] == s.elements[a] * s.elements[b]);
      }
    }
  }

  TEST_CASE("closure cap") {
    Caps caps;
    caps.max_group_order = 100;
    std::vector<Permutation> gens{perm({1, 0, 2, 3, 4}), perm({1, 2, 3, 4, 0})};
    CHECK_THROWS_AS(from_permutation_generators(gens, 5, caps), Error);
    try {
      from_permutation_generators(gens, 5, caps);
    } catch (Error const& e) {
      CHECK(e.code() == ErrorCode::group_too_large);
    }
  }

  TEST_CASE("table validation") {
    CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), Error);
    CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {0, 1}}), Error);
    // Latin square that is not associative (a loop of order 5)
    std::vector<std::vector<Element>> loop{{0, 1, 2, 3, 4},
                                           {1, 0, 3, 4, 2},
                                           {2, 4, 0, 1, 3},
                                           {3, 2, 4, 0, 1},
                                           {4, 3, 1, 2, 0}};
    CHECK_THROWS_AS(FiniteGroup::from_table(loop), Error);
  }

  TEST_CASE("group axioms across the corpus") {
    for (auto const& [name, g] : corpus()) {
      CAPTURE(name);
      CHECK(g->order() <= 24);
      CHECK(g->satisfies_axioms());
      auto again = FiniteGroup::from_table(g->table());
      CHECK(again->order() == g->order());
    }
  }

  TEST_CASE("normal core") {
    auto g = s3();
    CHECK(normal_core(Subgroup::whole(g)).elements() == Subgroup::whole(g).elements());
    auto a3 = Subgroup::generated_by(g, std::vector<Element>{2});
    CHECK(a3.order() == 3);
    CHECK(normal_core(a3) == a3);
    auto h = s3_h();
    CHECK(normal_core(h).elements() == core_by_conjugates(h));
    CHECK(normal_core(h).order() == 1);
  }

  TEST_CASE("normal core is the largest normal subgroup inside H") {
    for (auto const& name : {"S4", "D12", "Dic12", "A4", "S3xC2"}) {
      CAPTURE(name);
      GroupPtr g;
      for (auto const& c : corpus()) {
        if (c.name == name) {
          g = c.group;
        }
      }
      REQUIRE(g);
      auto subs = all_subgroups(g);
      for (auto const& h : subs) {
        auto core = normal_core(h);
        CHECK(core.elements() == core_by_conjugates(h));
        CHECK(core.is_normal());
        CHECK(core.is_subset_of(h));
        for (auto const& n : subs) {
          if (n.is_normal() && n.is_subset_of(h)) {
            CHECK(n.is_subset_of(core));
          }
        }
      }
    }
  }

  TEST_CASE("right coset transversal") {
    auto g = s3();
    CHECK(right_coset_transversal(Subgroup::whole(g)) == std::vector<Element>{0});
    CHECK(right_coset_transversal(Subgroup::trivial(g)) == std::vector<Element>{0, 1, 2, 3, 4, 5});
    auto h = s3_h();
    auto t = right_coset_transversal(h);
    CHECK(t.size() == 3);
    CHECK(t.front() == 0);
    // the cosets Hr partition G and r is the least element of its coset
    std::vector<int> hit(6, 0);
    for (Element r : t) {
      std::vector<Element> coset;
      for (Element x : h.elements()) {
        coset.push_back(g->mul(x, r));
      }
      CHECK(*std::min_element(coset.begin(), coset.end()) == r);
      for (Element y : coset) {
        ++hit[y];
      }
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](int c) { return c == 1; }));
  }

  TEST_CASE("quotient") {
    auto g = s3();
    CHECK(quotient(Subgroup::whole(g)).target->order() == 1);
    auto iso = quotient(Subgroup::trivial(g));
    CHECK(iso.target->order() == 6);
    auto a3 = Subgroup::generated_by(g, std::vector<Element>{2});
    auto q  = quotient(a3);
    CHECK(q.target->order() == 2);
    // brute-force coset multiplication: x, y in the same coset iff x^-1 y in A3
    for (Element x = 0; x < 6; ++x) {
      for (Element y = 0; y < 6; ++y) {
        CHECK((q.table[x] == q.table[y]) == a3.contains(g->mul(g->inv(x), y)));
        CHECK(q.table[g->mul(x, y)] == q.target->mul(q.table[x], q.table[y]));
      }
    }
    for (Element t = 0; t < q.target->order(); ++t) {
      CHECK(q.table[q.section[t]] == t);
    }
    CHECK_THROWS_AS(quotient(s3_h()), Error);
  }

  TEST_CASE("quotients across the corpus") {
    for (auto const& [name, g] : corpus()) {
      if (g->order() > 16) {
        continue;
      }
      CAPTURE(name);
      for (auto const& n : all_subgroups(g)) {
        if (!n.is_normal()) {
          continue;
        }
        auto q = quotient(n);
        CHECK(q.target->order() * n.order() == g->order());
        for (Element x = 0; x < g->order(); ++x) {
          CHECK((q.table[x] == 0) == n.contains(x));
          for (Element y = 0; y < g->order(); ++y) {
            CHECK(q.table[g->mul(x, y)] == q.target->mul(q.table[x], q.table[y]));
          }
        }
        for (Element t = 0; t < q.target->order(); ++t) {
          CHECK(q.table[q.section[t]] == t);
        }
      }
    }
  }

  TEST_CASE("left regular representation") {
    auto g   = s3();
    auto rep = left_regular_rep(*g);
    CHECK(rep[0].is_identity());
    for (Element x = 1; x < 6; ++x) {
      CHECK(rep[x].fixed_points() == 0);
    }
    // element 1 is an involution: three disjoint transpositions
    CHECK(g->mul(1, 1) == 0);
    CHECK(cycles_of_length(rep[1], 2) == 3);
    for (Element a = 0; a < 6; ++a) {
      for (Element b = 0; b < 6; ++b) {
        CHECK(rep[g->mul(a, b)] == rep[a] * rep[b]);
      }
      for (Element x = 0; x < 6; ++x) {
        CHECK(rep[a](x) == g->mul(a, x));
      }
    }
  }

  TEST_CASE("hamming") {
    auto id = Permutation::identity(5);
    CHECK(hamming(id, id) == Rational(0));
    CHECK(hamming(perm({1, 2, 3, 4, 0}), id) == Rational(1));
    CHECK(hamming(perm({1, 0, 2, 3, 4}), id) == Rational(2, 5));
    CHECK_THROWS_AS(hamming(id, Permutation::identity(4)), Error);
  }

  TEST_CASE("hamming is a metric") {
    std::mt19937 rng(7);
    for (std::size_t n : {1u, 2u, 5u, 9u}) {
      std::vector<Point> base(n);
      std::iota(base.begin(), base.end(), 0);
      auto random_perm = [&] {
        auto v = base;
        std::shuffle(v.begin(), v.end(), rng);
        return perm(v);
      };
      for (int trial = 0; trial < 300; ++trial) {
        auto p = random_perm(), q = random_perm(), r = random_perm();
        CHECK(hamming(p, q) == hamming(q, p));
        CHECK(hamming(p, r) <= hamming(p, q) + hamming(q, r));
        CHECK((hamming(p, q) == Rational(0)) == (p == q));
        CHECK(hamming(p, q) >= Rational(0));
        CHECK(hamming(p, q) <= Rational(1));
      }
    }
  }

  TEST_CASE("direct product") {
    auto g   = s3();
    auto one = cyclic_group(1);
    auto p   = direct_product(g, one);
    CHECK(p.group->order() == 6);
    for (Element a = 0; a < 6; ++a) {
      for (Element b = 0; b < 6; ++b) {
        CHECK(p.group->mul(a, b) == g->mul(a, b));
      }
    }
    auto v4 = direct_product(cyclic_group(2), cyclic_group(2)).group;
    CHECK(v4->order() == 4);
    int involutions = 0;
    for (Element x = 1; x < 4; ++x) {
      involutions += v4->mul(x, x) == 0;
    }
    CHECK(involutions == 3);
    auto big = direct_product(g, cyclic_group(4));
    CHECK(big.group->order() == 24);
    for (Element a = 0; a < 24; ++a) {
      for (Element b = 0; b < 24; ++b) {
        auto ab = big.group->mul(a, b);
        CHECK(big.first[ab] == g->mul(big.first[a], big.first[b]));
        CHECK(big.second[ab] == (big.second[a] + big.second[b]) % 4);
      }
    }
    Caps caps;
    caps.max_group_order = 20;
    CHECK_THROWS_AS(direct_product(g, cyclic_group(4), caps), Error);
  }

  TEST_CASE("co-sofic chains") {
    auto h = s3_h();
    auto g = h.parent();
    auto c = CoSoficChain::from_normal_core(h);
    CHECK(c.size() == 1);
    CHECK(c.stages()[0].normal.order() == 1);
    // the outer groups must intersect to the target
    CHECK(CoSoficChain::check(h, {{Subgroup::whole(g), Subgroup::trivial(g)}}).has_value());
    CHECK_THROWS_AS(CoSoficChain(h, {{h, h}}), Error);  // H is not normal in S3
  }

  TEST_CASE("chain product") {
    auto h  = s3_h();
    auto g  = h.parent();
    auto a3 = Subgroup::generated_by(g, std::vector<Element>{2});
    auto c1 = CoSoficChain(h, {{Subgroup::whole(g), a3}, {h, Subgroup::trivial(g)}});

    auto d8 = dihedral(4);
    auto r2 = Subgroup::generated_by(d8, std::vector<Element>{d8->mul(1, 1)});
    // a reflection subgroup of D8 and the chain D8 > <refl, r^2> > <refl>
    Element refl = 2;
    REQUIRE(d8->mul(refl, refl) == 0);
    auto k   = Subgroup::generated_by(d8, std::vector<Element>{refl});
    auto mid = Subgroup::generated_by(d8, std::vector<Element>{refl, d8->mul(1, 1)});
    REQUIRE(r2.is_normal());
    auto c2 = CoSoficChain(k, {{mid, r2}, {k, Subgroup::trivial(d8)}});

    auto prod = chain_product(c1, c2);
    CHECK(prod.chain.size() == 2);
    CHECK_FALSE(CoSoficChain::check(prod.chain.target(), prod.chain.stages()).has_value());
    auto const& P = *prod.product.group;
    // stage i is the product of the stages, element by element
    for (std::size_t i = 0; i < 2; ++i) {
      auto const& s = prod.chain.stages()[i];
      for (Element x = 0; x < P.order(); ++x) {
        auto a = prod.product.first[x], b = prod.product.second[x];
        CHECK(s.outer.contains(x) == (c1.stages()[i].outer.contains(a) && c2.stages()[i].outer.contains(b)));
        CHECK(s.normal.contains(x) == (c1.stages()[i].normal.contains(a) && c2.stages()[i].normal.contains(b)));
      }
    }
    // brute-force normality of every stage's normal part
    for (auto const& s : prod.chain.stages()) {
      for (Element n : s.normal.elements()) {
        for (Element y = 0; y < P.order(); ++y) {
          CHECK(s.normal.contains(P.conj(y, n)));
        }
      }
    }

    // trivial second chain: the product is c1 up to isomorphism
    auto one   = cyclic_group(1);
    auto t     = CoSoficChain(Subgroup::whole(one), {{Subgroup::whole(one), Subgroup::whole(one)}});
    auto plain = chain_product(c1, t);
    CHECK(plain.product.group->order() == 6);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(plain.chain.stages()[i].outer.order() == c1.stages()[i].outer.order());
      CHECK(plain.chain.stages()[i].normal.order() == c1.stages()[i].normal.order());
    }
    // padding repeats the last stage of the shorter chain
    CHECK(plain.chain.stages()[1].outer.order() == 2);
  }

  TEST_CASE("constant chains give a constant product") {
    auto g  = s3();
    auto a3 = Subgroup::generated_by(g, std::vector<Element>{2});
    auto c  = CoSoficChain(a3, {{a3, a3}, {a3, a3}});
    auto p  = chain_product(c, c);
    CHECK(p.chain.stages()[0].outer == p.chain.stages()[1].outer);
    CHECK(p.chain.stages()[0].normal == p.chain.stages()[1].normal);
    CHECK(p.chain.stages()[0].outer.order() == 9);
  }
}
