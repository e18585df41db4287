#pragma once

// Shared fixtures and brute-force oracles for the test binaries.  The oracles
// deliberately avoid the library code paths they check (plain vectors and
// std::set instead of tables and hashes).

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "sofic/amalgam.hpp"
#include "sofic/finite_group.hpp"
#include "sofic/permutation.hpp"

namespace sofic::test {

  inline Permutation perm(std::vector<Point> images) {
    return Permutation(std::move(images));
  }

  inline PermutationGroup perm_group(std::vector<std::vector<Point>> gens, std::size_t degree) {
    std::vector<Permutation> ps;
    for (auto& g : gens) {
      ps.push_back(perm(std::move(g)));
    }
    return from_permutation_generators(ps, degree);
  }

  // S3 from (0 1) and (0 1 2); element 1 is the transposition (0 1), element 2
  // the 3-cycle.
  inline GroupPtr s3() {
    return perm_group({{1, 0, 2}, {1, 2, 0}}, 3).group;
  }

  // {e, (0 1)} inside s3().
  inline Subgroup s3_h() {
    auto g = s3();
    return Subgroup::from_elements(g, {0, 1});
  }

  inline GroupPtr dihedral(std::size_t n) {
    std::vector<Point> r(n), s(n);
    for (Point i = 0; i < n; ++i) {
      r[i] = static_cast<Point>((i + 1) % n);
      s[i] = static_cast<Point>((n - i) % n);
    }
    return perm_group({r, s}, n).group;
  }

  inline GroupPtr alternating4() {
    return perm_group({{1, 2, 0, 3}, {0, 2, 3, 1}}, 4).group;
  }

  // Quaternion group Q8 as the regular action of i and j on {±1, ±i, ±j, ±k}
  // (points 0..7 = 1, i, j, k, -1, -i, -j, -k).
  inline GroupPtr quaternion8() {
    return perm_group({{1, 4, 3, 6, 5, 0, 7, 2}, {2, 7, 4, 1, 6, 3, 0, 5}}, 8).group;
  }

  // Dicyclic group of order 12 (a of order 6, x^2 = a^3, x a x^-1 = a^-1)
  // through its left regular action.
  inline GroupPtr dicyclic12() {
    // Elements a^i x^j, i < 6, j < 2, point index i + 6 j; x^2 = a^3.
    auto idx = [](int i, int j) { return static_cast<Point>(((i % 6) + 6) % 6 + 6 * j); };
    std::vector<Point> la(12), lx(12);
    for (int i = 0; i < 6; ++i) {
      // a * a^i = a^(i+1); a * a^i x = a^(i+1) x
      la[idx(i, 0)] = idx(i + 1, 0);
      la[idx(i, 1)] = idx(i + 1, 1);
      // x * a^i = a^-i x; x * a^i x = a^-i x^2 = a^(3 - i)
      lx[idx(i, 0)] = idx(-i, 1);
      lx[idx(i, 1)] = idx(3 - i, 0);
    }
    return perm_group({la, lx}, 12).group;
  }

  struct NamedGroup {
    std::string name;
    GroupPtr    group;
  };

  // Every group in the corpus has order at most 24.
  inline std::vector<NamedGroup> corpus() {
    std::vector<NamedGroup> out;
    for (std::size_t n = 1; n <= 24; ++n) {
      out.push_back({"C" + std::to_string(n), cyclic_group(n)});
    }
    for (std::size_t n = 3; n <= 12; ++n) {
      out.push_back({"D" + std::to_string(2 * n), dihedral(n)});
    }
    out.push_back({"S3", symmetric_group(3)});
    out.push_back({"S4", symmetric_group(4)});
    out.push_back({"A4", alternating4()});
    out.push_back({"Q8", quaternion8()});
    out.push_back({"Dic12", dicyclic12()});
    auto c2 = cyclic_group(2);
    auto v4 = direct_product(c2, c2).group;
    out.push_back({"C2^2", v4});
    out.push_back({"C2^3", direct_product(v4, c2).group});
    out.push_back({"C2^4", direct_product(v4, v4).group});
    out.push_back({"S3xC2", direct_product(s3(), c2).group});
    out.push_back({"S3xC3", direct_product(s3(), cyclic_group(3)).group});
    out.push_back({"S3xC4", direct_product(s3(), cyclic_group(4)).group});
    out.push_back({"S3xC2^2", direct_product(s3(), v4).group});
    out.push_back({"A4xC2", direct_product(alternating4(), c2).group});
    out.push_back({"Q8xC3", direct_product(quaternion8(), cyclic_group(3)).group});
    out.push_back({"C4xC4", direct_product(cyclic_group(4), cyclic_group(4)).group});
    out.push_back({"C3xC6", direct_product(cyclic_group(3), cyclic_group(6)).group});
    return out;
  }

  // All subgroups, by brute force over generating pairs (enough for groups of
  // order <= 24, where every subgroup is 2-generated).
  inline std::vector<Subgroup> all_subgroups(GroupPtr const& g) {
    std::set<std::vector<Element>> seen;
    std::vector<Subgroup>          out;
    for (Element a = 0; a < g->order(); ++a) {
      for (Element b = a; b < g->order(); ++b) {
        std::vector<Element> gens{a, b};
        auto                 s = Subgroup::generated_by(g, gens);
        if (seen.insert(s.elements()).second) {
          out.push_back(s);
        }
      }
    }
    return out;
  }

  // Naive composition (p*q)(x) = p(q(x)).
  inline std::vector<Point> compose(std::vector<Point> const& p, std::vector<Point> const& q) {
    std::vector<Point> r(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) {
      r[x] = p[q[x]];
    }
    return r;
  }

  // Brute-force closure size of a set of permutations.
  inline std::size_t closure_size(std::vector<std::vector<Point>> const& gens, std::size_t degree) {
    std::vector<Point> id(degree);
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<Point>> seen{id};
    std::vector<std::vector<Point>> frontier{id};
    while (!frontier.empty()) {
      std::vector<std::vector<Point>> next;
      for (auto const& p : frontier) {
        for (auto const& g : gens) {
          auto q = compose(g, p);
          if (seen.insert(q).second) {
            next.push_back(q);
          }
        }
      }
      frontier = std::move(next);
    }
    return seen.size();
  }

  // Letter helpers for plain doubles.
  inline Letter L(std::size_t factor, Element e) {
    return Letter{factor, FactorValue{e, 0}};
  }
  inline Letter LZ(std::size_t factor, Element e, long m) {
    return Letter{factor, FactorValue{e, BigInt(m)}};
  }

  // Every word of length <= n over the alphabet, shortest first.
  inline std::vector<Word> all_words(std::vector<Letter> const& alphabet, std::size_t n) {
    std::vector<Word> out{Word{}};
    std::size_t       begin = 0;
    for (std::size_t len = 1; len <= n; ++len) {
      auto end = out.size();
      for (auto i = begin; i < end; ++i) {
        for (auto const& l : alphabet) {
          auto w = out[i];
          w.push_back(l);
          out.push_back(std::move(w));
        }
      }
      begin = end;
    }
    return out;
  }

  inline GraphSpec one_loop() {
    return GraphSpec{{0}, {{0, 0}}};
  }

}  // namespace sofic::test
