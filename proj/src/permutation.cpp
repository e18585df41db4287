#include "sofic/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "sofic/error.hpp"

namespace sofic {

  Permutation::Permutation(std::vector<Point> images)
      : _images(std::move(images)) {
    std::vector<bool> seen(_images.size(), false);
    for (Point y : _images) {
      if (y >= _images.size() || seen[y]) {
        throw Error(ErrorCode::invalid_argument,
                    "image list is not a bijection of 0.."
                        + std::to_string(_images.size()) + "-1");
      }
      seen[y] = true;
    }
  }

  Permutation Permutation::identity(std::size_t degree) {
    Permutation p;
    p._images.resize(degree);
    std::iota(p._images.begin(), p._images.end(), Point{0});
    return p;
  }

  bool Permutation::is_identity() const noexcept {
    for (std::size_t i = 0; i < _images.size(); ++i) {
      if (_images[i] != i) {
        return false;
      }
    }
    return true;
  }

  std::size_t Permutation::fixed_points() const noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < _images.size(); ++i) {
      n += (_images[i] == i);
    }
    return n;
  }

  Permutation Permutation::inverse() const {
    Permutation p;
    p._images.resize(_images.size());
    for (std::size_t i = 0; i < _images.size(); ++i) {
      p._images[_images[i]] = static_cast<Point>(i);
    }
    return p;
  }

  Permutation operator*(Permutation const& p, Permutation const& q) {
    if (p.degree() != q.degree()) {
      throw Error(ErrorCode::degree_mismatch, "composing permutations of degree "
                                                  + std::to_string(p.degree())
                                                  + " and "
                                                  + std::to_string(q.degree()));
    }
    Permutation r;
    r._images.resize(q.degree());
    for (std::size_t i = 0; i < q.degree(); ++i) {
      r._images[i] = p._images[q._images[i]];
    }
    return r;
  }

  std::size_t displaced(Permutation const& p, Permutation const& q) {
    if (p.degree() != q.degree()) {
      throw Error(ErrorCode::degree_mismatch,
                  "hamming distance between degrees "
                      + std::to_string(p.degree()) + " and "
                      + std::to_string(q.degree()));
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < p.degree(); ++i) {
      n += (p(static_cast<Point>(i)) != q(static_cast<Point>(i)));
    }
    return n;
  }

  Rational hamming(Permutation const& p, Permutation const& q) {
    auto d = displaced(p, q);
    if (p.degree() == 0) {
      return Rational(0);
    }
    return Rational(static_cast<std::int64_t>(d),
                    static_cast<std::int64_t>(p.degree()));
  }

  Permutation power(Permutation const& p, std::uint64_t e) {
    Permutation result = Permutation::identity(p.degree());
    Permutation base   = p;
    while (e > 0) {
      if (e & 1U) {
        result = result * base;
      }
      e >>= 1U;
      if (e > 0) {
        base = base * base;
      }
    }
    return result;
  }

  std::uint64_t order(Permutation const& p) {
    std::vector<bool> seen(p.degree(), false);
    std::uint64_t     result = 1;
    for (std::size_t i = 0; i < p.degree(); ++i) {
      if (seen[i]) {
        continue;
      }
      std::uint64_t len = 0;
      for (auto x = static_cast<Point>(i); !seen[x]; x = p(x)) {
        seen[x] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  std::size_t PermutationHash::operator()(Permutation const& p) const noexcept {
    // FNV-1a over the image words.
    std::uint64_t h = 14695981039346656037ULL;
    for (Point x : p.images()) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

}  // namespace sofic
