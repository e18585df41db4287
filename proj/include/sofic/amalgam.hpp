#pragma once

// Amalgamated free products of a family of factors over one common group C.
//
// Every factor is A or A x Z for a finite group A, with C embedded into A
// (and into A x {0}).  This covers the copies of G and of H x Z in the
// decomposition of a graph-of-groups double, the copies of G x Z of the
// line amalgam, and the plain doubles used by the embedding maps.
//
// Canonical forms put all C-content into a single left head:
//
//     c . s_1 . s_2 ... s_n
//
// where each s_i is a non-identity right-coset representative of C in its
// factor (the least base index in the coset, exponent kept) and adjacent
// letters lie in different factors.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "finite_group.hpp"
#include "parallel.hpp"
#include "permutation.hpp"

namespace sofic {

  using BigInt = boost::multiprecision::cpp_int;

  struct FactorValue {
    Element base = identity_element;
    BigInt  shift = 0;  // always 0 in factors without a Z coordinate

    friend bool operator==(FactorValue const& a, FactorValue const& b) {
      return a.base == b.base && a.shift == b.shift;
    }
    friend bool operator<(FactorValue const& a, FactorValue const& b) {
      return a.base != b.base ? a.base < b.base : a.shift < b.shift;
    }
  };

  class Factor {
   public:
    // `embedding[c]` is the base element that common element c maps to; it
    // must be an injective homomorphism.  Throws invalid_argument otherwise.
    Factor(std::string          name,
           GroupPtr             common,
           GroupPtr             base,
           std::vector<Element> embedding,
           bool                 has_z);

    std::string const& name() const noexcept {
      return _name;
    }
    GroupPtr const& base() const noexcept {
      return _base;
    }
    bool has_z() const noexcept {
      return _has_z;
    }
    std::vector<Element> const& embedding() const noexcept {
      return _embedding;
    }

    FactorValue multiply(FactorValue const& a, FactorValue const& b) const;
    FactorValue inverse(FactorValue const& a) const;
    FactorValue embed(Element c) const;

    bool is_identity(FactorValue const& v) const noexcept {
      return v.base == identity_element && v.shift == 0;
    }

    // c when v == embed(c).
    std::optional<Element> common_part(FactorValue const& v) const;

    // v == embed(c) * rep with rep the coset representative of Cv.
    std::pair<Element, FactorValue> split(FactorValue const& v) const;

    bool is_transversal(FactorValue const& v) const noexcept {
      return _rep[v.base] == v.base;
    }

    // Throws malformed_letter.
    void validate(FactorValue const& v) const;

   private:
    std::string          _name;
    GroupPtr             _common;
    GroupPtr             _base;
    std::vector<Element> _embedding;
    bool                 _has_z;
    std::vector<Element> _rep;        // base -> least index of its right coset
    std::vector<Element> _head;       // base -> c with embed(c) * rep == base
    std::vector<long>    _preimage;   // base -> c, or -1
  };

  struct GraphSpec {
    std::vector<int>                 vertices;
    std::vector<std::pair<int, int>> edges;  // loops and multi-edges allowed
  };

  // Spanning forest by breadth-first search from the least vertex id of each
  // component, scanning edges in list order.  Loops never enter the forest.
  struct SpanningForest {
    std::vector<bool> tree_edge;
    std::size_t       components = 0;
  };
  SpanningForest spanning_forest(GraphSpec const& graph);

  struct GraphDecomposition {
    GraphSpec                                graph;
    std::vector<bool>                        tree_edge;
    std::vector<std::size_t>                 vertex_factor;  // by vertex position
    std::vector<std::optional<std::size_t>>  edge_factor;    // non-tree edges only
  };

  class AmalgamSpec {
   public:
    AmalgamSpec(GroupPtr common, std::vector<Factor> factors);

    GroupPtr const& common() const noexcept {
      return _common;
    }
    std::vector<Factor> const& factors() const noexcept {
      return _factors;
    }
    Factor const& factor(std::size_t i) const {
      return _factors.at(i);
    }
    std::size_t size() const noexcept {
      return _factors.size();
    }

    std::optional<GraphDecomposition> provenance;

   private:
    GroupPtr            _common;
    std::vector<Factor> _factors;
  };

  // Copies of `sub`'s parent amalgamated over `sub`, one per copy.
  AmalgamSpec double_over(Subgroup const& sub, std::size_t copies, bool has_z = false);

  // One copy of G per vertex (factor id = vertex position in sorted order) and
  // one H x Z per non-tree edge (factor id = vertex count + edge order).
  // Throws disconnected_graph.
  AmalgamSpec decompose_graph(GraphSpec const& graph, Subgroup const& h);

  struct Letter {
    std::size_t factor = 0;
    FactorValue value;

    friend bool operator==(Letter const&, Letter const&) = default;
    friend bool operator<(Letter const& a, Letter const& b) {
      return a.factor != b.factor ? a.factor < b.factor : a.value < b.value;
    }
  };

  using Word = std::vector<Letter>;

  struct NormalForm {
    Element             head = identity_element;
    std::vector<Letter> letters;

    bool is_identity() const noexcept {
      return head == identity_element && letters.empty();
    }

    friend bool operator==(NormalForm const&, NormalForm const&) = default;
    friend bool operator<(NormalForm const& a, NormalForm const& b) {
      if (a.letters.size() != b.letters.size()) {
        return a.letters.size() < b.letters.size();
      }
      if (a.head != b.head) {
        return a.head < b.head;
      }
      return a.letters < b.letters;
    }
  };

  struct NormalFormHash {
    std::size_t operator()(NormalForm const& nf) const noexcept;
  };
  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept;
  };

  // Throws malformed_letter (value outside its factor) or spec_mismatch
  // (unknown factor id).
  void check_word(AmalgamSpec const& spec, Word const& word);

  NormalForm normalize(AmalgamSpec const& spec, Word const& word);
  NormalForm multiply(AmalgamSpec const& spec, NormalForm const& a, NormalForm const& b);
  NormalForm invert(AmalgamSpec const& spec, NormalForm const& a);

  // The head is emitted as a letter of factor 0 when it is not the identity.
  Word to_word(AmalgamSpec const& spec, NormalForm const& nf);

  // Head inside C; letters are non-identity transversal representatives;
  // adjacent letters in different factors.
  bool is_normal_form(AmalgamSpec const& spec, NormalForm const& nf);

  // Letters outside C with adjacent factors distinct (no transversal
  // requirement).
  bool is_standard_form(AmalgamSpec const& spec, Word const& word);

  Word inverse_word(AmalgamSpec const& spec, Word const& word);

  // Every non-identity element of each factor base (exponent 0) plus the
  // (identity, +1) and (identity, -1) of each factor with a Z coordinate.
  std::vector<Letter> default_alphabet(AmalgamSpec const& spec);

  // All distinct normal forms of words of length <= radius over `letters`
  // (closed under inverses first), in breadth-first order starting with the
  // identity.  Throws ball_too_large.
  std::vector<NormalForm> ball(AmalgamSpec const&         spec,
                               std::vector<Letter> const& letters,
                               std::size_t                radius,
                               Caps const&                caps = {},
                               Execution                  exec = Execution::parallel);

  // A finite permutation action of the amalgam: an image for every base
  // element of every factor, plus the image of (identity, 1) for factors with
  // a Z coordinate.
  struct AmalgamAction {
    std::size_t                             degree = 0;
    std::vector<std::vector<Permutation>>   base_images;
    std::vector<std::optional<Permutation>> shift_images;

    Permutation image(AmalgamSpec const& spec, Letter const& letter) const;
    Permutation image(AmalgamSpec const& spec, NormalForm const& nf) const;
    Permutation image(AmalgamSpec const& spec, Word const& word) const;

    // Empty when every factor map is a homomorphism and all factors agree on
    // the common group; otherwise the first violated relation.
    std::optional<std::string> check(AmalgamSpec const& spec) const;
  };

  // Componentwise action on the disjoint union of the point sets.
  AmalgamAction disjoint_union(std::vector<AmalgamAction> const& parts);

  std::string to_string(AmalgamSpec const& spec, NormalForm const& nf);

}  // namespace sofic
