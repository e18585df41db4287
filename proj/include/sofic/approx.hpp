#pragma once

// Finite approximations g -> Sym(A) and their defects in normalized Hamming
// distance.
//
// The verifier is group-agnostic: an ApproxMap carries an explicit support
// list, and the caller supplies F together with the resolved products of F x F
// as support indices.  Defects are worst-case maxima, reported exactly.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "permutation.hpp"
#include "rational.hpp"

namespace sofic {

  struct ApproxMap {
    std::size_t              degree = 0;
    std::vector<std::string> support;   // display form of each support element
    std::vector<Permutation> table;     // image of each support element
    std::size_t              identity = 0;
  };

  struct ApproxDomain {
    std::vector<std::size_t> finite_set;  // F, as support indices
    std::vector<std::size_t> products;    // |F| x |F| row-major support indices

    std::size_t product(std::size_t i, std::size_t j) const {
      return products[i * finite_set.size() + j];
    }
  };

  struct DefectReport {
    bool     unital = false;
    Rational mult_defect{0};
    Rational free_defect{0};
    // Support indices of a worst pair / element (first in row-major order),
    // present whenever the corresponding defect is nonzero.
    std::optional<std::pair<std::size_t, std::size_t>> mult_witness;
    std::optional<std::size_t>                         free_witness;
    Rational                                           epsilon{0};
    bool                                               passed = false;

    friend bool operator==(DefectReport const&, DefectReport const&) = default;
  };

  // Passes iff unital, mult_defect < eps and free_defect < eps.
  // Throws unresolved_product when F or F.F is not inside the support.
  DefectReport verify(ApproxMap const&    map,
                      ApproxDomain const& domain,
                      Rational const&     eps,
                      Execution           exec = Execution::parallel);

  // g -> phi1(g) x phi2(g) on the product set, point (x, y) = x * n2 + y.
  // Throws support_mismatch.
  ApproxMap product(ApproxMap const& a1, ApproxMap const& a2, std::size_t max_degree = 100000);

  // Products in the stage group, restricted to what the caller can resolve.
  struct StageLaw {
    std::size_t                                                           identity = 0;
    std::function<std::optional<std::size_t>(std::size_t, std::size_t)> multiply;
  };

  class StageConditionError : public Error {
   public:
    StageConditionError(int condition, std::size_t first, std::size_t second, std::string const& what)
        : Error(ErrorCode::stage_conditions_violated, what),
          _condition(condition),
          _witness{first, second} {}

    // 1: products map to products, 2: non-identity to non-identity,
    // 3: identity to identity.
    int condition() const noexcept {
      return _condition;
    }
    std::pair<std::size_t, std::size_t> witness() const noexcept {
      return _witness;
    }

   private:
    int                                 _condition;
    std::pair<std::size_t, std::size_t> _witness;
  };

  // phi(g) = stage_map(assignment(g)) on the domain support.  The three
  // conditions are checked on F first; a violation throws
  // StageConditionError naming the condition and the witness.
  ApproxMap pullback(ApproxMap const&                stage_map,
                     StageLaw const&                 law,
                     ApproxDomain const&             domain,
                     std::vector<std::size_t> const& assignment,
                     std::vector<std::string>        support,
                     std::size_t                     identity);

  // Left-composes the image of every non-identity support element with a
  // permutation moving exactly ceil(delta * degree) points (two when that
  // count is one, since a single point cannot be moved alone).  Seeded and
  // platform independent.
  ApproxMap corrupt(ApproxMap const& map, Rational const& delta, std::uint64_t seed);

}  // namespace sofic
