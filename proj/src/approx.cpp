#include "sofic/approx.hpp"

#include <random>

namespace sofic {

  namespace {
    struct Worst {
      std::size_t count = 0;
      std::size_t i     = 0;
      std::size_t j     = 0;
    };

    // Points where stage(x) != outer(inner(x)).
    std::size_t mismatch(Permutation const& whole,
                         Permutation const& outer,
                         Permutation const& inner) noexcept {
      std::size_t n = 0;
      for (std::size_t x = 0; x < whole.degree(); ++x) {
        auto p = static_cast<Point>(x);
        n += (whole(p) != outer(inner(p)));
      }
      return n;
    }

    Worst row_worst(ApproxMap const& map, ApproxDomain const& d, std::size_t i) {
      auto const& F = d.finite_set;
      Worst       w{0, i, 0};
      for (std::size_t j = 0; j < F.size(); ++j) {
        auto c = mismatch(map.table[d.product(i, j)], map.table[F[i]], map.table[F[j]]);
        if (c > w.count) {
          w = {c, i, j};
        }
      }
      return w;
    }

    void check_domain(ApproxMap const& map, ApproxDomain const& d) {
      auto const n = map.table.size();
      if (map.degree == 0 || map.identity >= n) {
        throw Error(ErrorCode::invalid_argument, "approximation has no identity or degree 0");
      }
      for (auto const& p : map.table) {
        if (p.degree() != map.degree) {
          throw Error(ErrorCode::degree_mismatch, "support images of differing degree");
        }
      }
      if (d.products.size() != d.finite_set.size() * d.finite_set.size()) {
        throw Error(ErrorCode::unresolved_product, "unresolved product: table is not |F| x |F|");
      }
      for (auto s : d.finite_set) {
        if (s >= n) {
          throw Error(ErrorCode::unresolved_product, "unresolved product: F not in the support");
        }
      }
      for (auto s : d.products) {
        if (s >= n) {
          throw Error(ErrorCode::unresolved_product,
                      "unresolved product: F.F not in the support");
        }
      }
    }
  }  // namespace

  DefectReport verify(ApproxMap const&    map,
                      ApproxDomain const& domain,
                      Rational const&     eps,
                      Execution           exec) {
    check_domain(map, domain);
    auto const&  F = domain.finite_set;
    DefectReport r;
    r.epsilon = eps;
    r.unital  = map.table[map.identity].is_identity();

    std::vector<Worst> rows(F.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (std::size_t i = 0; i < F.size(); ++i) {
        rows[i] = row_worst(map, domain, i);
      }
    } else {
      for (std::size_t i = 0; i < F.size(); ++i) {
        rows[i] = row_worst(map, domain, i);
      }
    }
    Worst worst;
    for (auto const& w : rows) {
      if (w.count > worst.count) {
        worst = w;
      }
    }
    auto const deg = static_cast<std::int64_t>(map.degree);
    r.mult_defect  = Rational(static_cast<std::int64_t>(worst.count), deg);
    if (worst.count > 0) {
      r.mult_witness = std::pair{F[worst.i], F[worst.j]};
    }

    std::size_t most_fixed = 0;
    for (auto g : F) {
      if (g == map.identity) {
        continue;
      }
      auto fp = map.table[g].fixed_points();
      if (fp > most_fixed) {
        most_fixed     = fp;
        r.free_witness = g;
      }
    }
    r.free_defect = Rational(static_cast<std::int64_t>(most_fixed), deg);
    r.passed      = r.unital && r.mult_defect < eps && r.free_defect < eps;
    return r;
  }

  ApproxMap product(ApproxMap const& a1, ApproxMap const& a2, std::size_t max_degree) {
    if (a1.support != a2.support || a1.identity != a2.identity
        || a1.table.size() != a2.table.size()) {
      throw Error(ErrorCode::support_mismatch, "product of approximations with different supports");
    }
    std::size_t const n1 = a1.degree, n2 = a2.degree;
    if (n2 != 0 && n1 > max_degree / n2) {
      throw Error(ErrorCode::degree_too_large, "product degree exceeds cap");
    }
    ApproxMap out;
    out.degree   = n1 * n2;
    out.support  = a1.support;
    out.identity = a1.identity;
    for (std::size_t s = 0; s < a1.table.size(); ++s) {
      std::vector<Point> images(out.degree);
      for (std::size_t x = 0; x < n1; ++x) {
        for (std::size_t y = 0; y < n2; ++y) {
          images[x * n2 + y] = static_cast<Point>(a1.table[s](static_cast<Point>(x)) * n2
                                                  + a2.table[s](static_cast<Point>(y)));
        }
      }
      out.table.emplace_back(std::move(images));
    }
    return out;
  }

  ApproxMap pullback(ApproxMap const&                stage_map,
                     StageLaw const&                 law,
                     ApproxDomain const&             domain,
                     std::vector<std::size_t> const& assignment,
                     std::vector<std::string>        support,
                     std::size_t                     identity) {
    if (assignment.size() != support.size() || identity >= support.size()) {
      throw Error(ErrorCode::invalid_argument, "assignment does not cover the support");
    }
    for (auto s : assignment) {
      if (s >= stage_map.table.size()) {
        throw Error(ErrorCode::invalid_argument, "assignment leaves the stage support");
      }
    }
    auto const& F = domain.finite_set;
    for (auto s : domain.products) {
      if (s >= support.size()) {
        throw Error(ErrorCode::unresolved_product, "unresolved product: F.F not in the support");
      }
    }
    for (std::size_t i = 0; i < F.size(); ++i) {
      for (std::size_t j = 0; j < F.size(); ++j) {
        auto lhs = law.multiply(assignment[F[i]], assignment[F[j]]);
        if (!lhs || *lhs != assignment[domain.product(i, j)]) {
          throw StageConditionError(1, F[i], F[j],
                                    "stage conditions violated: condition 1 (products) fails at "
                                        + support[F[i]] + " , " + support[F[j]]);
        }
      }
    }
    for (auto g : F) {
      if (g != identity && assignment[g] == law.identity) {
        throw StageConditionError(2, g, g,
                                  "stage conditions violated: condition 2 (non-identity) fails at "
                                      + support[g]);
      }
    }
    if (assignment[identity] != law.identity) {
      throw StageConditionError(3, identity, identity,
                                "stage conditions violated: condition 3 (identity) fails");
    }
    ApproxMap out;
    out.degree   = stage_map.degree;
    out.support  = std::move(support);
    out.identity = identity;
    out.table.reserve(assignment.size());
    for (auto s : assignment) {
      out.table.push_back(stage_map.table[s]);
    }
    return out;
  }

  namespace {
    // Uniform integer in [0, n) from raw mt19937_64 output by rejection, so
    // the stream does not depend on the standard library's distributions.
    std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
      std::uint64_t const limit = std::mt19937_64::max() - (std::mt19937_64::max() % n);
      std::uint64_t       x;
      do {
        x = rng();
      } while (x >= limit);
      return x % n;
    }
  }  // namespace

  ApproxMap corrupt(ApproxMap const& map, Rational const& delta, std::uint64_t seed) {
    if (delta < 0 || delta > 1) {
      throw Error(ErrorCode::invalid_argument, "corruption rate outside [0, 1]");
    }
    auto const n = map.degree;
    auto       k = static_cast<std::size_t>(ceil_times(delta, static_cast<std::int64_t>(n)));
    if (k == 1) {
      k = n >= 2 ? 2 : 0;
    }
    ApproxMap       out = map;
    std::mt19937_64 rng(seed);
    if (k == 0) {
      return out;
    }
    std::vector<Point> pool(n);
    for (std::size_t s = 0; s < map.table.size(); ++s) {
      if (s == map.identity) {
        continue;
      }
      for (std::size_t x = 0; x < n; ++x) {
        pool[x] = static_cast<Point>(x);
      }
      // Partial Fisher-Yates: pool[0..k) is a uniformly random ordered
      // k-subset; cycling it moves exactly those k points.
      for (std::size_t i = 0; i < k; ++i) {
        auto j = i + static_cast<std::size_t>(bounded(rng, n - i));
        std::swap(pool[i], pool[j]);
      }
      std::vector<Point> cycle(n);
      for (std::size_t x = 0; x < n; ++x) {
        cycle[x] = static_cast<Point>(x);
      }
      for (std::size_t i = 0; i < k; ++i) {
        cycle[pool[i]] = pool[(i + 1) % k];
      }
      out.table[s] = Permutation(std::move(cycle)) * map.table[s];
    }
    return out;
  }

}  // namespace sofic
