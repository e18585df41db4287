#pragma once

// An equality oracle for amalgam words that does not use normal forms.
//
// Equality is certified by elementary rewrites only:
//   * merge two adjacent letters of the same factor,
//   * delete an identity letter,
//   * slide a common element c across a boundary: (f,x)(g,y) -> (f,xc)(g,c^-1 y),
//   * retag a common-group letter into another factor.
// Each rewrite preserves the group element, so reaching the empty word from
// w1.w2^-1, or a common descendant of w1 and w2, proves w1 == w2.
//
// Inequality is certified by a finite permutation action of the amalgam under
// which the two words act differently.

#include <cstddef>
#include <optional>
#include <vector>

#include "amalgam.hpp"

namespace sofic {

  enum class Verdict { equal, unequal, unknown };

  char const* to_string(Verdict v) noexcept;

  struct OracleResult {
    Verdict verdict = Verdict::unknown;
    // equal: a word both inputs rewrite to (empty when w1.w2^-1 was reduced
    // to the empty word directly)
    std::optional<Word> common_descendant;
    // unequal: index of the separating action
    std::optional<std::size_t> separator;
    std::size_t                states = 0;
  };

  // Single rewrite steps from `w`, in a fixed order.
  std::vector<Word> rewrites(AmalgamSpec const& spec, Word const& w);

  // Breadth-first search from w1.w2^-1 to the empty word, at most `budget`
  // states; separators are tried first.
  OracleResult oracle_equal(AmalgamSpec const&                spec,
                            Word const&                       w1,
                            Word const&                       w2,
                            std::vector<AmalgamAction> const& separators,
                            std::size_t                       budget);

  // Batch form for many pairs: each word is explored once.  The reachable set
  // of a word contains every reduced word of its element and nothing
  // shorter, so the least shortest reachable word is a shared descendant of
  // any two equal words whose exploration finished within budget.
  class WordOracle {
   public:
    struct Prepared {
      Word               word;
      bool               complete = false;
      Word               canonical;  // least shortest reachable word
      std::size_t        states = 0;
      std::vector<Point> signature;  // concatenated separator images
    };

    WordOracle(AmalgamSpec const& spec, std::vector<AmalgamAction> separators,
               std::size_t budget);

    Prepared     prepare(Word const& w) const;
    OracleResult compare(Prepared const& a, Prepared const& b) const;
    OracleResult operator()(Word const& a, Word const& b) const;

    std::vector<AmalgamAction> const& separators() const noexcept {
      return _separators;
    }

   private:
    AmalgamSpec const&         _spec;
    std::vector<AmalgamAction> _separators;
    std::vector<std::size_t>   _offsets;
    std::size_t                _budget;
  };

}  // namespace sofic
