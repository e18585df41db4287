#pragma once

// JSON forms of groups, words, approximations, reports and certificates.
//
// Every rational is a "p/q" string.  Parse failures throw parse_error with a
// JSON-pointer style location, e.g. "at /group/table/2: row has 5 entries".

#include <optional>
#include <string>

#include <json.hpp>

#include "amalgam.hpp"
#include "approx.hpp"
#include "builder.hpp"
#include "embeddings.hpp"
#include "finite_group.hpp"
#include "rational.hpp"

namespace sofic::io {

  using Json = nlohmann::ordered_json;

  // Parsing (inputs may use any key order).
  Rational              rational_from_json(Json const& j, std::string const& at);
  GroupPtr              group_from_json(Json const& j, std::string const& at, Caps const& caps);
  Subgroup              subgroup_from_json(Json const& j, GroupPtr const& parent, std::string const& at);
  GraphSpec             graph_from_json(Json const& j, std::string const& at);
  Word                  word_from_json(AmalgamSpec const& spec, Json const& j, std::string const& at);
  NormalForm            normal_form_from_json(AmalgamSpec const& spec, Json const& j, std::string const& at);
  std::vector<CoSoficChain::Stage> chain_from_json(Json const& j, GroupPtr const& parent,
                                                   std::string const& at);

  struct ApproxDocument {
    ApproxMap                   map;
    ApproxDomain                domain;
    std::optional<DefectReport> report;
    std::optional<Rational>     epsilon;
  };
  // Reads a certificate or a bare {"approx": ..., "epsilon": ...} document.
  ApproxDocument approx_from_json(Json const& j);
  DefectReport   report_from_json(Json const& j, std::string const& at);

  // Emission.
  Json to_json(Rational const& r);
  Json to_json(Permutation const& p);
  Json group_to_json(FiniteGroup const& g);
  Json to_json(AmalgamSpec const& spec, Letter const& l);
  Json to_json(AmalgamSpec const& spec, Word const& w);
  Json to_json(AmalgamSpec const& spec, NormalForm const& nf);
  Json to_json(DefectReport const& r);
  Json to_json(ApproxMap const& m, ApproxDomain const& d);
  Json to_json(EmbeddingReport const& r);
  Json to_json(CoSoficChain const& c);
  Json spec_to_json(AmalgamSpec const& spec);

  // The deterministic part of a certificate (no meta block).
  Json certificate_to_json(BuildResult const& r, AmalgamSpec const& spec,
                           std::string const& input_digest);

  // Hex SHA-256 of the canonical (sorted-key, compact) dump.
  std::string digest(Json const& instance);

}  // namespace sofic::io
