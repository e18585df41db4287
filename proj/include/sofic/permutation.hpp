#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rational.hpp"

namespace sofic {

  using Point = std::uint32_t;

  // A bijection of {0, ..., degree - 1}. Products compose right to left:
  // (p * q)(x) == p(q(x)), so a map g -> perm(g) is a homomorphism exactly
  // when perm(g * h) == perm(g) * perm(h).
  class Permutation {
   public:
    Permutation() = default;
    explicit Permutation(std::vector<Point> images);

    static Permutation identity(std::size_t degree);

    std::size_t degree() const noexcept {
      return _images.size();
    }

    Point operator()(Point x) const noexcept {
      return _images[x];
    }

    std::vector<Point> const& images() const noexcept {
      return _images;
    }

    bool is_identity() const noexcept;
    std::size_t fixed_points() const noexcept;
    Permutation inverse() const;

    friend Permutation operator*(Permutation const& p, Permutation const& q);

    friend bool operator==(Permutation const&, Permutation const&) = default;
    friend auto operator<=>(Permutation const&, Permutation const&) = default;

   private:
    std::vector<Point> _images;
  };

  // Number of points where p and q disagree.
  std::size_t displaced(Permutation const& p, Permutation const& q);

  // Normalized Hamming distance, exact.
  Rational hamming(Permutation const& p, Permutation const& q);

  // p^e for e >= 0.
  Permutation power(Permutation const& p, std::uint64_t e);

  // lcm of the cycle lengths.
  std::uint64_t order(Permutation const& p);

  struct PermutationHash {
    std::size_t operator()(Permutation const& p) const noexcept;
  };

}  // namespace sofic
