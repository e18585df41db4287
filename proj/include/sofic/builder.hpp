#pragma once

// Explicit approximations for balls in graph-of-groups doubles with finite
// vertex group: truncate the Z coordinates, find finite permutation actions
// of the (now finite-factor) amalgam that move every ball element, and pull
// back the left regular representation of the image group.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "amalgam.hpp"
#include "approx.hpp"
#include "finite_group.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace sofic {

  struct TruncatedSpec {
    AmalgamSpec   base;
    AmalgamSpec   truncated;  // each A x Z replaced by A x Z/N
    std::uint64_t modulus = 1;
    std::size_t   radius  = 0;

    // (a, m) -> (a, m mod N); letters of finite factors are unchanged.
    Letter     stage_letter(Letter const& letter) const;
    NormalForm stage_map(NormalForm const& nf) const;

    // An action of the truncated spec, read as an action of the base spec
    // (the Z coordinate acts through Z/N).
    AmalgamAction lift(AmalgamAction const& action) const;
  };

  // N = 2R + 1 when some factor carries Z, otherwise 1 and the truncated
  // spec is the base spec.  Throws truncation_collision if the stage map is
  // not injective on the radius-R ball.
  TruncatedSpec truncate_Z(AmalgamSpec const& spec,
                           std::size_t        radius,
                           Caps const&        caps = {},
                           Execution          exec = Execution::parallel);

  // Finite actions of the truncated amalgam.
  struct QuotientBundle {
    std::vector<AmalgamAction> components;

    std::size_t degree() const noexcept;
    AmalgamAction combined() const;
  };

  // The action on G x Z/N: G-copies translate the first coordinate, (h, k)
  // translates by h and shifts the second coordinate by k.  Requires every
  // finite factor to be the same copy of G and every Z factor to have base
  // isomorphic to the common group.  Throws invalid_argument or
  // degree_too_large.
  QuotientBundle seed_quotient(TruncatedSpec const& t, Caps const& caps = {});

  struct SearchOptions {
    std::uint64_t budget         = 50'000'000;  // search nodes
    std::size_t   min_degree     = 2;
    std::size_t   max_degree     = 0;  // 0: four times the largest factor order
    std::size_t   max_extensions = 200'000;
  };

  struct SearchStats {
    std::uint64_t            nodes = 0;
    std::vector<std::size_t> degrees_tried;
    std::size_t              components_added   = 0;
    std::size_t              components_pruned  = 0;
    bool                     budget_exhausted   = false;
  };

  struct SeparationResult {
    QuotientBundle           bundle;
    std::vector<std::size_t> unseparated;  // indices into the target list
    SearchStats              stats;
  };

  // Appends actions of a finite-factor amalgam until every non-identity
  // target acts nontrivially, then drops components that turned out to be
  // redundant.  Degrees are tried in ascending order; for each degree every
  // action type of the common group is tried, then every extension of it to
  // each factor, factors of the target first.
  SeparationResult separate(AmalgamSpec const&             spec,
                            std::vector<NormalForm> const& targets,
                            QuotientBundle                 bundle,
                            SearchOptions const&           options = {});

  // Same, for a ball of the untruncated spec.
  SeparationResult separate(TruncatedSpec const&           t,
                            std::vector<NormalForm> const& ball,
                            QuotientBundle                 bundle,
                            SearchOptions const&           options = {});

  // Indices of targets whose image under `action` is the identity.
  std::vector<std::size_t> unseparated_targets(AmalgamSpec const&             spec,
                                               AmalgamAction const&           action,
                                               std::vector<NormalForm> const& targets);

  // The finite image group of an action: closure of the images of every
  // factor's generators, breadth first from the identity.  Element 0 is the
  // identity.  Throws group_too_large past `cap`.
  struct ImageGroup {
    std::vector<Permutation>                                      elements;
    std::unordered_map<Permutation, std::size_t, PermutationHash> index;

    std::size_t order() const noexcept {
      return elements.size();
    }
    std::size_t find(Permutation const& p) const;  // throws invalid_argument
  };
  ImageGroup image_group(AmalgamSpec const& spec, AmalgamAction const& action, std::size_t cap);

  struct BuildOptions {
    std::size_t   radius = 1;
    Rational      epsilon{1, 10};
    SearchOptions search;
    Caps          caps;
    Execution     exec = Execution::parallel;
  };

  struct Certificate {
    std::size_t   radius = 0;
    Rational      epsilon{0};
    std::uint64_t truncation = 1;

    std::vector<AmalgamAction> components;  // over the truncated spec
    std::vector<std::vector<Element>> factor_generators;  // per truncated factor
    std::size_t                component_degree = 0;  // sum of component degrees
    std::size_t                image_order      = 0;  // acting degree of the approximation

    std::vector<NormalForm> support;  // F first, then the new elements of F.F
    std::size_t             ball_size = 0;

    // Stage data of the pullback: the image group element of each support
    // element, as an index into the image group enumeration.
    std::vector<std::size_t> stage_elements;

    std::optional<ApproxMap>    approx;
    ApproxDomain                domain;
    std::optional<DefectReport> report;

    SearchStats stats;
    double      seconds = 0;  // wall clock, kept out of deterministic output
  };

  struct BuildResult {
    bool                    complete = false;
    Certificate             certificate;
    std::vector<NormalForm> unseparated;  // ball elements over the base spec
  };

  // Pipeline for an arbitrary spec accepted by seed_quotient.
  BuildResult build_approximation(AmalgamSpec const& spec, BuildOptions const& options);

  BuildResult build_approximation(GraphSpec const&    graph,
                                  Subgroup const&     h,
                                  BuildOptions const& options);

}  // namespace sofic
