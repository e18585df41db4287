#pragma once

// Exact arithmetic for finite groups given by multiplication tables.
//
// Elements are indices 0 .. order-1 and the identity is always index 0.
// Groups are immutable once built and are passed around as
// std::shared_ptr<const FiniteGroup> so subgroups, quotients and amalgam
// factors can refer to their parent without copying the table.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permutation.hpp"

namespace sofic {

  using Element = std::uint32_t;

  inline constexpr Element identity_element = 0;

  struct Caps {
    std::size_t max_group_order = 20000;
    std::size_t max_degree      = 100000;
    std::size_t max_ball_size   = 1000000;
  };

  class FiniteGroup;
  using GroupPtr = std::shared_ptr<FiniteGroup const>;

  class FiniteGroup {
   public:
    // Validates shape, identity at 0, Latin-square rows and columns, and
    // associativity on all triples.
    static GroupPtr from_table(std::vector<std::vector<Element>> const& table,
                               std::vector<std::string> labels = {},
                               Caps const& caps = {});

    std::size_t order() const noexcept {
      return _order;
    }

    Element mul(Element a, Element b) const noexcept {
      return _mul[static_cast<std::size_t>(a) * _order + b];
    }

    Element inv(Element a) const noexcept {
      return _inv[a];
    }

    Element conj(Element g, Element x) const noexcept {
      return mul(mul(g, x), inv(g));
    }

    std::string const& label(Element a) const {
      return _labels[a];
    }

    std::vector<std::vector<Element>> table() const;

    // Exhaustive associativity, identity and inverse checks.
    bool satisfies_axioms() const;

    // Order of an element.
    std::size_t element_order(Element a) const;

    // Greedy generating set: scan indices upward and keep any element that is
    // not already in the subgroup generated by `fixed` and the kept ones.
    std::vector<Element> generators(std::span<Element const> fixed = {}) const;

   private:
    FiniteGroup() = default;
    friend class GroupBuilder;

    std::size_t              _order = 0;
    std::vector<Element>     _mul;
    std::vector<Element>     _inv;
    std::vector<std::string> _labels;
  };

  // Internal construction helper shared by the factories below; not
  // validating.
  class GroupBuilder {
   public:
    static GroupPtr make(std::size_t              order,
                         std::vector<Element>     mul,
                         std::vector<std::string> labels);
  };

  struct PermutationGroup {
    GroupPtr                 group;
    std::vector<Permutation> elements;  // faithful image of each element
  };

  // Closure under composition, breadth first from the identity, so element
  // indices are deterministic.
  PermutationGroup from_permutation_generators(std::span<Permutation const> gens,
                                               std::size_t degree,
                                               Caps const& caps = {});

  GroupPtr cyclic_group(std::size_t n);
  GroupPtr symmetric_group(std::size_t n, Caps const& caps = {});

  class Subgroup {
   public:
    Subgroup() = default;

    // Throws not_a_subgroup unless the set contains 0 and is closed.
    static Subgroup from_elements(GroupPtr parent, std::vector<Element> elems);
    static Subgroup generated_by(GroupPtr parent, std::span<Element const> gens);
    static Subgroup whole(GroupPtr parent);
    static Subgroup trivial(GroupPtr parent);

    GroupPtr const& parent() const noexcept {
      return _parent;
    }

    std::vector<Element> const& elements() const noexcept {
      return _elements;
    }

    std::size_t order() const noexcept {
      return _elements.size();
    }

    std::size_t index() const noexcept {
      return _parent->order() / _elements.size();
    }

    bool contains(Element g) const noexcept {
      return _member[g];
    }

    bool is_subset_of(Subgroup const& other) const;
    bool is_normal() const;

    // The subgroup as a group in its own right; `to_parent[i]` is the parent
    // index of element i, and element 0 maps to the parent identity.
    struct Materialized {
      GroupPtr             group;
      std::vector<Element> to_parent;
    };
    Materialized as_group() const;

    friend bool operator==(Subgroup const& a, Subgroup const& b) {
      return a._parent == b._parent && a._elements == b._elements;
    }

   private:
    GroupPtr             _parent;
    std::vector<Element> _elements;  // sorted, contains 0
    std::vector<bool>    _member;
  };

  Subgroup intersection(Subgroup const& a, Subgroup const& b);

  // The intersection of all conjugates gHg^-1.
  Subgroup normal_core(Subgroup const& h);

  // One representative per right coset Hg, the least index in each coset,
  // listed in increasing order (so the identity comes first).
  std::vector<Element> right_coset_transversal(Subgroup const& h);

  // rep[g] = least index of Hg.
  std::vector<Element> right_coset_representatives(Subgroup const& h);

  struct QuotientMap {
    GroupPtr             source;
    Subgroup             kernel;
    GroupPtr             target;
    std::vector<Element> table;    // source element -> target element
    std::vector<Element> section;  // target element -> least representative
  };

  // Throws not_normal.
  QuotientMap quotient(Subgroup const& n, Caps const& caps = {});

  // g -> (x -> g x), degree |G|.
  std::vector<Permutation> left_regular_rep(FiniteGroup const& g);

  struct DirectProduct {
    GroupPtr             group;
    std::vector<Element> first;   // projection to G1
    std::vector<Element> second;  // projection to G2
    std::size_t          second_order = 1;

    Element pair(Element a, Element b) const noexcept {
      return static_cast<Element>(a * second_order + b);
    }
  };

  // Element (a, b) has index a * |G2| + b.
  DirectProduct direct_product(GroupPtr const& g1,
                               GroupPtr const& g2,
                               Caps const&     caps = {});

  // H1 x H2 inside an already-built G1 x G2.
  Subgroup product_subgroup(DirectProduct const& p,
                            Subgroup const&      a,
                            Subgroup const&      b);

  // Finite stage data witnessing that `target` is co-sofic in `parent`: a
  // decreasing sequence of pairs (outer_i, normal_i) with normal_i normal in
  // the parent, normal_i inside outer_i, and the outer_i intersecting to the
  // target.
  class CoSoficChain {
   public:
    struct Stage {
      Subgroup outer;
      Subgroup normal;
    };

    // Throws invalid_stage with the first violated invariant.
    CoSoficChain(Subgroup target, std::vector<Stage> stages);

    // Single stage (H, core(H)).
    static CoSoficChain from_normal_core(Subgroup const& h);

    GroupPtr const& parent() const noexcept {
      return _target.parent();
    }
    Subgroup const& target() const noexcept {
      return _target;
    }
    std::vector<Stage> const& stages() const noexcept {
      return _stages;
    }
    std::size_t size() const noexcept {
      return _stages.size();
    }

    // Empty optional when every invariant holds, else a description.
    static std::optional<std::string> check(Subgroup const&           target,
                                            std::vector<Stage> const& stages);

   private:
    Subgroup           _target;
    std::vector<Stage> _stages;
  };

  struct ChainProduct {
    DirectProduct product;
    CoSoficChain  chain;
  };

  // Stage i is (G1_i x G2_i, H1_i x H2_i); the shorter chain is padded by
  // repeating its last stage.
  ChainProduct chain_product(CoSoficChain const& c1,
                             CoSoficChain const& c2,
                             Caps const&         caps = {});

}  // namespace sofic
