#include "sofic/embeddings.hpp"

namespace sofic {

  namespace {
    void require_normal_form(AmalgamSpec const& spec, NormalForm const& w) {
      check_word(spec, w.letters);
      if (w.head >= spec.common()->order()) {
        throw Error(ErrorCode::malformed_letter, "head outside the common group");
      }
      if (!is_normal_form(spec, w)) {
        throw Error(ErrorCode::spec_mismatch, "input is not a normal form of the domain");
      }
    }

    // Codomain common index of the G element g (which must lie in the image of
    // the common group).
    Element common_index(AmalgamSpec const& spec, Element g) {
      auto c = spec.factor(0).common_part({g, 0});
      if (!c) {
        throw Error(ErrorCode::invalid_argument, "element outside the common group");
      }
      return *c;
    }

    Word with_head(AmalgamSpec const& spec, Element head) {
      Word w;
      if (head != identity_element) {
        w.push_back({0, spec.factor(0).embed(head)});
      }
      return w;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // *_{H cap K} H -> *_K G
  ////////////////////////////////////////////////////////////////////////

  SubAmalgamEmbedding sub_amalgam_embedding(Subgroup const& h, Subgroup const& k,
                                            std::size_t copies) {
    if (h.parent() != k.parent()) {
      throw Error(ErrorCode::invalid_argument, "H and K must be subgroups of the same group");
    }
    auto                 mh = h.as_group();
    std::vector<Element> meet;
    for (Element i = 0; i < mh.to_parent.size(); ++i) {
      if (k.contains(mh.to_parent[i])) {
        meet.push_back(i);
      }
    }
    auto inner = Subgroup::from_elements(mh.group, meet);
    SubAmalgamEmbedding e{double_over(inner, copies), double_over(k, copies), mh.to_parent, {}};
    for (Element c = 0; c < e.domain.common()->order(); ++c) {
      auto g = e.to_g[e.domain.factor(0).embedding()[c]];
      e.common_map.push_back(common_index(e.codomain, g));
    }
    return e;
  }

  NormalForm embed_sub_amalgam(SubAmalgamEmbedding const& e, NormalForm const& w) {
    require_normal_form(e.domain, w);
    Word letters;
    for (auto const& l : w.letters) {
      letters.push_back({l.factor, {e.to_g[l.value.base], 0}});
    }
    if (!is_standard_form(e.codomain, letters)) {
      throw Error(ErrorCode::invalid_argument, "image letters are not in standard form");
    }
    Word word = with_head(e.codomain, e.common_map[w.head]);
    word.insert(word.end(), letters.begin(), letters.end());
    return normalize(e.codomain, word);
  }

  ////////////////////////////////////////////////////////////////////////
  // *_{H x K} (G x K) -> (*_H G) x K
  ////////////////////////////////////////////////////////////////////////

  ProductEmbedding product_embedding(Subgroup const& h, GroupPtr const& k, std::size_t copies) {
    auto dp = direct_product(h.parent(), k);
    auto hk = product_subgroup(dp, h, Subgroup::whole(k));
    ProductEmbedding e{double_over(hk, copies), double_over(h, copies), dp, k, {}};
    for (Element c = 0; c < e.domain.common()->order(); ++c) {
      auto p = e.domain.factor(0).embedding()[c];
      e.common_map.push_back(common_index(e.codomain, dp.first[p]));
    }
    return e;
  }

  std::pair<NormalForm, Element> embed_product(ProductEmbedding const& e, NormalForm const& w) {
    require_normal_form(e.domain, w);
    auto const& k    = *e.k;
    auto const& dp   = e.product;
    Element     kacc = dp.second[e.domain.factor(0).embedding()[w.head]];
    Word        letters;
    for (auto const& l : w.letters) {
      letters.push_back({l.factor, {dp.first[l.value.base], 0}});
      kacc = k.mul(kacc, dp.second[l.value.base]);
    }
    if (!is_standard_form(e.codomain, letters)) {
      throw Error(ErrorCode::invalid_argument, "image letters are not in standard form");
    }
    Word word = with_head(e.codomain, e.common_map[w.head]);
    word.insert(word.end(), letters.begin(), letters.end());
    return {normalize(e.codomain, word), kacc};
  }

  ////////////////////////////////////////////////////////////////////////
  // D_Gamma(G, H) -> *_H (G x Z)
  ////////////////////////////////////////////////////////////////////////

  LineEmbedding line_embedding(AmalgamSpec const& decomposition) {
    if (!decomposition.provenance) {
      throw Error(ErrorCode::invalid_argument, "line embedding needs a graph decomposition");
    }
    Factor const* vertex = nullptr;
    for (auto const& f : decomposition.factors()) {
      if (!f.has_z()) {
        vertex = &f;
        break;
      }
    }
    if (vertex == nullptr) {
      throw Error(ErrorCode::invalid_argument, "decomposition has no vertex factor");
    }
    auto h = Subgroup::from_elements(vertex->base(), vertex->embedding());
    LineEmbedding e{decomposition, double_over(h, decomposition.size(), true), {},
                    vertex->embedding()};
    for (std::size_t i = 0; i < decomposition.size(); ++i) {
      e.line_index.emplace_back(i);
    }
    return e;
  }

  NormalForm embed_double_into_line(LineEmbedding const& e, NormalForm const& w) {
    require_normal_form(e.domain, w);
    Word word = with_head(e.codomain, common_index(e.codomain, e.to_g[w.head]));
    for (auto const& l : w.letters) {
      auto line = l.factor < e.line_index.size() ? e.line_index[l.factor] : std::nullopt;
      if (!line || *line >= e.codomain.size()) {
        throw Error(ErrorCode::unassigned_factor,
                    "unassigned factor id " + std::to_string(l.factor));
      }
      auto const& f = e.domain.factor(l.factor);
      Element     g = l.value.base;
      if (f.has_z()) {
        g = e.to_g[*f.common_part({l.value.base, 0})];
      }
      word.push_back({*line, {g, l.value.shift}});
    }
    return normalize(e.codomain, word);
  }

  ////////////////////////////////////////////////////////////////////////
  // Stages
  ////////////////////////////////////////////////////////////////////////

  StageData stage_data_from_chain(CoSoficChain const& chain) {
    StageData   data;
    auto const& target = chain.target();
    auto const& g      = *chain.parent();
    std::vector<QuotientMap> qs;
    for (auto const& st : chain.stages()) {
      auto                 q = quotient(st.normal);
      std::vector<Element> image;
      for (Element x : st.outer.elements()) {
        image.push_back(q.table[x]);
      }
      StageData::Stage s{Subgroup::from_elements(q.target, image), {}};
      for (Element x : target.elements()) {
        s.head_map.push_back(q.table[x]);
      }
      data.stages.push_back(std::move(s));
      qs.push_back(std::move(q));
    }
    for (Element x = 0; x < g.order(); ++x) {
      if (target.contains(x)) {
        continue;
      }
      auto& seq = data.sequences[x];
      for (auto const& q : qs) {
        seq.push_back(q.table[x]);
      }
    }
    return data;
  }

  StagewiseEmbedding stagewise_embedding(Subgroup const& h, StageData data, std::size_t copies) {
    StagewiseEmbedding e{double_over(h, copies), std::move(data), {}};
    auto const         nc = e.domain.common()->order();
    auto const         ns = e.data.stages.size();
    for (std::size_t i = 0; i < ns; ++i) {
      auto const& st = e.data.stages[i];
      if (st.head_map.size() != nc) {
        throw Error(ErrorCode::invalid_stage,
                    "invalid stage " + std::to_string(i) + ": head map has the wrong size");
      }
      for (Element x : st.head_map) {
        if (x >= st.sub.parent()->order() || !st.sub.contains(x)) {
          throw Error(ErrorCode::invalid_stage,
                      "invalid stage " + std::to_string(i) + ": head map leaves H_i");
        }
      }
      e.stage_specs.push_back(double_over(st.sub, copies));
    }
    for (auto const& [g, seq] : e.data.sequences) {
      if (seq.size() != ns) {
        throw Error(ErrorCode::invalid_stage,
                    "representing sequence of the wrong length for element " + std::to_string(g));
      }
      for (std::size_t i = 0; i < ns; ++i) {
        if (seq[i] >= e.data.stages[i].sub.parent()->order()) {
          throw Error(ErrorCode::invalid_stage, "representing sequence entry out of range");
        }
      }
    }
    return e;
  }

  std::vector<StageWord> stagewise_embed(StagewiseEmbedding const& e, NormalForm const& w) {
    require_normal_form(e.domain, w);
    auto const&            g = *e.domain.factor(0).base();
    std::vector<StageWord> out(e.data.stages.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto const& st   = e.data.stages[i];
      auto const& spec = e.stage_specs[i];
      out[i].head      = common_index(spec, st.head_map[w.head]);
      for (auto const& l : w.letters) {
        auto it = e.data.sequences.find(l.value.base);
        if (it == e.data.sequences.end()) {
          throw Error(ErrorCode::improper_sequence,
                      "improper sequence: no representing sequence for " + g.label(l.value.base));
        }
        Element x = it->second[i];
        if (st.sub.contains(x)) {
          throw Error(ErrorCode::improper_sequence,
                      "improper sequence: entry of " + g.label(l.value.base) + " at stage "
                          + std::to_string(i) + " lies in H_i");
        }
        out[i].letters.push_back({l.factor, {x, 0}});
      }
      out[i].standard = is_standard_form(spec, out[i].letters);
    }
    return out;
  }

  CoSoficMaps::CoSoficMaps(CoSoficChain chain) : _chain(std::move(chain)) {
    for (auto const& st : _chain.stages()) {
      _quotients.push_back(sofic::quotient(st.normal));
    }
  }

  StagePoint CoSoficMaps::map(Element g, std::size_t k) const {
    if (k >= _quotients.size()) {
      throw Error(ErrorCode::invalid_stage,
                  "invalid stage index " + std::to_string(k) + " of " + std::to_string(_quotients.size()));
    }
    if (g >= _chain.parent()->order()) {
      throw Error(ErrorCode::invalid_argument, "element outside the group");
    }
    return {_quotients[k].table[g], g, _chain.stages()[k].outer.contains(g)};
  }

  bool CoSoficMaps::member(Element g) const {
    for (std::size_t k = 0; k < _quotients.size(); ++k) {
      if (!map(g, k).inside) {
        return false;
      }
    }
    return true;
  }

  StagePoint cosofic_stage_map(Element g, CoSoficChain const& chain, std::size_t k) {
    if (k >= chain.size()) {
      throw Error(ErrorCode::invalid_stage,
                  "invalid stage index " + std::to_string(k) + " of " + std::to_string(chain.size()));
    }
    auto const& st = chain.stages()[k];
    auto        q  = quotient(st.normal);
    if (g >= chain.parent()->order()) {
      throw Error(ErrorCode::invalid_argument, "element outside the group");
    }
    return {q.table[g], g, st.outer.contains(g)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Reports
  ////////////////////////////////////////////////////////////////////////

  namespace {
    template <class Image, class Map, class Mul, class Show>
    EmbeddingReport check(std::string        name,
                          AmalgamSpec const& domain,
                          std::size_t        radius,
                          Execution          exec,
                          Map const&         map,
                          Mul const&         mul,
                          Show const&        show) {
      EmbeddingReport r;
      r.name      = std::move(name);
      r.radius    = radius;
      auto const b = ball(domain, default_alphabet(domain), radius, {}, exec);
      auto const n = b.size();
      std::vector<Image> img(n);
      for (std::size_t i = 0; i < n; ++i) {
        img[i] = map(b[i]);
        r.ball.push_back(to_string(domain, b[i]));
        r.images.push_back(show(img[i]));
      }
      // First failing column per row, then the first row in order.
      std::vector<std::optional<std::size_t>> bad_mul(n), bad_inj(n);
      auto row = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!bad_mul[i] && map(multiply(domain, b[i], b[j])) != mul(img[i], img[j])) {
            bad_mul[i] = j;
          }
          if (!bad_inj[i] && j > i && img[i] == img[j]) {
            bad_inj[i] = j;
          }
        }
      };
      if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < n; ++i) {
          row(i);
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          row(i);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (bad_mul[i] && !r.multiplicative_witness) {
          r.multiplicative_witness = std::pair{i, *bad_mul[i]};
        }
        if (bad_inj[i] && !r.injective_witness) {
          r.injective_witness = std::pair{i, *bad_inj[i]};
        }
      }
      r.pairs_checked  = n * n;
      r.multiplicative = !r.multiplicative_witness;
      r.injective      = !r.injective_witness;
      return r;
    }
  }  // namespace

  EmbeddingReport report(SubAmalgamEmbedding const& e, std::size_t radius, Execution exec) {
    return check<NormalForm>(
        "sub-amalgam", e.domain, radius, exec,
        [&](NormalForm const& w) { return embed_sub_amalgam(e, w); },
        [&](NormalForm const& a, NormalForm const& b) { return multiply(e.codomain, a, b); },
        [&](NormalForm const& w) { return to_string(e.codomain, w); });
  }

  EmbeddingReport report(ProductEmbedding const& e, std::size_t radius, Execution exec) {
    using Image = std::pair<NormalForm, Element>;
    return check<Image>(
        "product", e.domain, radius, exec,
        [&](NormalForm const& w) { return embed_product(e, w); },
        [&](Image const& a, Image const& b) {
          return Image{multiply(e.codomain, a.first, b.first), e.k->mul(a.second, b.second)};
        },
        [&](Image const& w) {
          return "(" + to_string(e.codomain, w.first) + ", " + e.k->label(w.second) + ")";
        });
  }

  EmbeddingReport report(LineEmbedding const& e, std::size_t radius, Execution exec) {
    return check<NormalForm>(
        "double-to-line", e.domain, radius, exec,
        [&](NormalForm const& w) { return embed_double_into_line(e, w); },
        [&](NormalForm const& a, NormalForm const& b) { return multiply(e.codomain, a, b); },
        [&](NormalForm const& w) { return to_string(e.codomain, w); });
  }

}  // namespace sofic
