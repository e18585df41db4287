#pragma once

// Word-level embedding homomorphisms between amalgams, stage maps, and
// ball-based multiplicativity / injectivity checks.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amalgam.hpp"
#include "error.hpp"
#include "finite_group.hpp"
#include "parallel.hpp"

namespace sofic {

  // *_{H cap K} H  ->  *_K G, letterwise on standard forms.
  struct SubAmalgamEmbedding {
    AmalgamSpec          domain;      // copies of H over H cap K
    AmalgamSpec          codomain;    // copies of G over K
    std::vector<Element> to_g;        // domain base element -> G
    std::vector<Element> common_map;  // domain common element -> codomain common element
  };
  SubAmalgamEmbedding sub_amalgam_embedding(Subgroup const& h, Subgroup const& k,
                                            std::size_t copies = 2);

  // Throws malformed_letter / spec_mismatch for words not over the domain.
  NormalForm embed_sub_amalgam(SubAmalgamEmbedding const& e, NormalForm const& w);

  // *_{H x K} (G x K)  ->  (*_H G) x K.
  struct ProductEmbedding {
    AmalgamSpec   domain;    // copies of G x K over H x K
    AmalgamSpec   codomain;  // copies of G over H
    DirectProduct product;   // G x K
    GroupPtr      k;
    std::vector<Element> common_map;  // domain common element -> codomain common element
  };
  ProductEmbedding product_embedding(Subgroup const& h, GroupPtr const& k, std::size_t copies = 2);

  std::pair<NormalForm, Element> embed_product(ProductEmbedding const& e, NormalForm const& w);

  // D_Gamma(G, H)  ->  *_H (G x Z): vertex letter g -> (g, 0), edge letter
  // (h, m) -> (h, m), each factor to its assigned copy.
  struct LineEmbedding {
    AmalgamSpec                             domain;
    AmalgamSpec                             codomain;
    std::vector<std::optional<std::size_t>> line_index;  // per domain factor
    std::vector<Element>                    to_g;        // domain common element -> G
  };

  // Line copy i is domain factor i: vertices in increasing id order, then
  // the non-tree edges in edge order.  The domain must come from
  // decompose_graph.
  LineEmbedding line_embedding(AmalgamSpec const& decomposition);

  // Throws unassigned_factor.
  NormalForm embed_double_into_line(LineEmbedding const& e, NormalForm const& w);

  // Finite stages (H_i <= L_i) and representing sequences for a double
  // *_H G.
  struct StageData {
    struct Stage {
      Subgroup             sub;       // H_i inside L_i = sub.parent()
      std::vector<Element> head_map;  // common element of the domain -> H_i
    };
    std::vector<Stage>                      stages;
    std::map<Element, std::vector<Element>> sequences;  // G element -> entry per stage
  };

  // L_i = G / N_i, H_i = outer_i / N_i and g -> g N_i at each stage of the
  // chain.  Sequences are recorded for every element outside the target,
  // proper or not.
  StageData stage_data_from_chain(CoSoficChain const& chain);

  struct StagewiseEmbedding {
    AmalgamSpec              domain;       // copies of G over H
    StageData                data;
    std::vector<AmalgamSpec> stage_specs;  // copies of L_i over H_i
  };

  // Throws invalid_stage when the stages do not fit the domain.
  StagewiseEmbedding stagewise_embedding(Subgroup const& h, StageData data, std::size_t copies = 2);

  struct StageWord {
    Element head = identity_element;  // common element of the stage spec
    Word    letters;
    bool    standard = false;  // structural check over the stage spec
  };

  // Throws improper_sequence when a letter has no sequence or an entry lands
  // in H_i.
  std::vector<StageWord> stagewise_embed(StagewiseEmbedding const& e, NormalForm const& w);

  // Stage k of a co-sofic chain: g -> (g N_k, g).
  struct StagePoint {
    Element coset  = identity_element;  // element of G / N_k
    Element g      = identity_element;
    bool    inside = false;             // g N_k lies in outer_k / N_k
  };

  class CoSoficMaps {
   public:
    explicit CoSoficMaps(CoSoficChain chain);

    // Throws invalid_stage.
    StagePoint map(Element g, std::size_t k) const;

    // Inside at every stage.
    bool member(Element g) const;

    CoSoficChain const& chain() const noexcept {
      return _chain;
    }
    QuotientMap const& quotient(std::size_t k) const {
      return _quotients.at(k);
    }

   private:
    CoSoficChain             _chain;
    std::vector<QuotientMap> _quotients;
  };

  StagePoint cosofic_stage_map(Element g, CoSoficChain const& chain, std::size_t k);

  struct EmbeddingReport {
    std::string              name;
    std::size_t              radius = 0;
    std::vector<std::string> ball;    // domain elements, display form
    std::vector<std::string> images;  // codomain elements, display form
    bool                     multiplicative = false;
    bool                     injective      = false;
    std::size_t              pairs_checked  = 0;
    // Ball indices of a failing pair, when there is one.
    std::optional<std::pair<std::size_t, std::size_t>> multiplicative_witness;
    std::optional<std::pair<std::size_t, std::size_t>> injective_witness;
  };

  // Exhaustive checks over every pair of the radius-R ball of the domain,
  // default alphabet.
  EmbeddingReport report(SubAmalgamEmbedding const& e, std::size_t radius,
                         Execution exec = Execution::parallel);
  EmbeddingReport report(ProductEmbedding const& e, std::size_t radius,
                         Execution exec = Execution::parallel);
  EmbeddingReport report(LineEmbedding const& e, std::size_t radius,
                         Execution exec = Execution::parallel);

}  // namespace sofic
