#include "sofic/builder.hpp"

#include <chrono>
#include <set>
#include <unordered_map>

namespace sofic {

  ////////////////////////////////////////////////////////////////////////
  // Truncation
  ////////////////////////////////////////////////////////////////////////

  Letter TruncatedSpec::stage_letter(Letter const& letter) const {
    if (!base.factor(letter.factor).has_z()) {
      return letter;
    }
    BigInt const n = modulus;
    BigInt       r = letter.value.shift % n;
    if (r < 0) {
      r += n;
    }
    auto k = static_cast<Element>(r);
    return {letter.factor, {static_cast<Element>(letter.value.base * modulus + k), 0}};
  }

  NormalForm TruncatedSpec::stage_map(NormalForm const& nf) const {
    Word w = to_word(base, nf);
    for (auto& l : w) {
      l = stage_letter(l);
    }
    return normalize(truncated, w);
  }

  AmalgamAction TruncatedSpec::lift(AmalgamAction const& action) const {
    AmalgamAction out;
    out.degree = action.degree;
    out.base_images.resize(base.size());
    out.shift_images.assign(base.size(), std::nullopt);
    for (std::size_t i = 0; i < base.size(); ++i) {
      auto const& f = base.factor(i);
      if (!f.has_z()) {
        out.base_images[i] = action.base_images.at(i);
        continue;
      }
      for (Element a = 0; a < f.base()->order(); ++a) {
        out.base_images[i].push_back(action.base_images.at(i).at(a * modulus));
      }
      out.shift_images[i] = action.base_images[i].at(modulus > 1 ? 1 : 0);
    }
    return out;
  }

  namespace {
    AmalgamSpec truncated_spec(AmalgamSpec const& spec, std::uint64_t n, Caps const& caps) {
      std::vector<Factor> factors;
      auto const          z = cyclic_group(n);
      for (auto const& f : spec.factors()) {
        if (!f.has_z()) {
          factors.push_back(f);
          continue;
        }
        auto                 dp = direct_product(f.base(), z, caps);
        std::vector<Element> emb;
        for (Element e : f.embedding()) {
          emb.push_back(dp.pair(e, 0));
        }
        factors.emplace_back(f.name(), spec.common(), dp.group, std::move(emb), false);
      }
      AmalgamSpec out(spec.common(), std::move(factors));
      out.provenance = spec.provenance;
      return out;
    }
  }  // namespace

  TruncatedSpec truncate_Z(AmalgamSpec const& spec,
                           std::size_t        radius,
                           Caps const&        caps,
                           Execution          exec) {
    bool any_z = false;
    for (auto const& f : spec.factors()) {
      any_z = any_z || f.has_z();
    }
    if (!any_z) {
      return TruncatedSpec{spec, spec, 1, radius};
    }
    std::uint64_t const n = 2 * static_cast<std::uint64_t>(radius) + 1;
    TruncatedSpec       t{spec, truncated_spec(spec, n, caps), n, radius};

    auto const                                          b = ball(spec, default_alphabet(spec), radius, caps, exec);
    std::unordered_map<NormalForm, std::size_t, NormalFormHash> seen;
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto [it, fresh] = seen.emplace(t.stage_map(b[i]), i);
      if (!fresh) {
        throw Error(ErrorCode::truncation_collision,
                    "truncation collision: " + to_string(spec, b[it->second]) + " and "
                        + to_string(spec, b[i]) + " agree mod " + std::to_string(n));
      }
    }
    return t;
  }

  ////////////////////////////////////////////////////////////////////////
  // Quotients
  ////////////////////////////////////////////////////////////////////////

  std::size_t QuotientBundle::degree() const noexcept {
    std::size_t d = 0;
    for (auto const& c : components) {
      d += c.degree;
    }
    return d;
  }

  AmalgamAction QuotientBundle::combined() const {
    return disjoint_union(components);
  }

  QuotientBundle seed_quotient(TruncatedSpec const& t, Caps const& caps) {
    auto const& base   = t.base;
    auto const& common = *base.common();

    // The vertex group G and the embedding of the common group into it.
    GroupPtr             g;
    std::vector<Element> into_g;
    for (auto const& f : base.factors()) {
      if (f.has_z()) {
        continue;
      }
      if (!g) {
        g      = f.base();
        into_g = f.embedding();
      } else if (f.base() != g || f.embedding() != into_g) {
        throw Error(ErrorCode::invalid_argument,
                    "seed quotient needs every finite factor to be the same copy of G");
      }
    }
    if (!g) {
      g = base.common();
      into_g.resize(common.order());
      for (Element c = 0; c < common.order(); ++c) {
        into_g[c] = c;
      }
    }
    for (auto const& f : base.factors()) {
      if (f.has_z() && f.base()->order() != common.order()) {
        throw Error(ErrorCode::invalid_argument,
                    "seed quotient needs Z factors over the common group itself");
      }
    }

    std::size_t const gn = g->order();
    std::size_t const n  = t.modulus;
    if (n != 0 && gn > caps.max_degree / n) {
      throw Error(ErrorCode::degree_too_large, "seed degree exceeds cap");
    }
    std::size_t const degree = gn * n;
    auto translate = [&](Element by, std::size_t shift) {
      std::vector<Point> img(degree);
      for (Element x = 0; x < gn; ++x) {
        for (std::size_t j = 0; j < n; ++j) {
          img[x * n + j] = static_cast<Point>(g->mul(by, x) * n + (j + shift) % n);
        }
      }
      return Permutation(std::move(img));
    };

    AmalgamAction act;
    act.degree = degree;
    act.base_images.resize(base.size());
    act.shift_images.assign(base.size(), std::nullopt);
    for (std::size_t i = 0; i < base.size(); ++i) {
      auto const& f = base.factor(i);
      if (!f.has_z()) {
        for (Element a = 0; a < gn; ++a) {
          act.base_images[i].push_back(translate(a, 0));
        }
        continue;
      }
      // Truncated base element a * N + k is (a, k) in A x Z/N.
      auto const& tb = *t.truncated.factor(i).base();
      for (Element e = 0; e < tb.order(); ++e) {
        Element a = static_cast<Element>(e / n);
        auto    c = f.common_part({a, 0});
        act.base_images[i].push_back(translate(into_g[*c], e % n));
      }
    }
    if (auto bad = act.check(t.truncated)) {
      throw Error(ErrorCode::invalid_argument, "seed is not an action: " + *bad);
    }
    return QuotientBundle{{std::move(act)}};
  }

  SeparationResult separate(TruncatedSpec const&           t,
                            std::vector<NormalForm> const& ball,
                            QuotientBundle                 bundle,
                            SearchOptions const&           options) {
    std::vector<NormalForm> targets;
    targets.reserve(ball.size());
    for (auto const& nf : ball) {
      targets.push_back(t.stage_map(nf));
    }
    return separate(t.truncated, targets, std::move(bundle), options);
  }

  std::size_t ImageGroup::find(Permutation const& p) const {
    auto it = index.find(p);
    if (it == index.end()) {
      throw Error(ErrorCode::invalid_argument, "permutation outside the image group");
    }
    return it->second;
  }

  ImageGroup image_group(AmalgamSpec const& spec, AmalgamAction const& action, std::size_t cap) {
    std::vector<Permutation> gens;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      for (Element g : spec.factor(i).base()->generators()) {
        gens.push_back(action.base_images[i][g]);
      }
      if (action.shift_images[i]) {
        gens.push_back(*action.shift_images[i]);
      }
    }
    ImageGroup q;
    q.elements.push_back(Permutation::identity(action.degree));
    q.index.emplace(q.elements[0], 0);
    for (std::size_t i = 0; i < q.elements.size(); ++i) {
      for (auto const& s : gens) {
        Permutation p = q.elements[i] * s;
        if (q.index.contains(p)) {
          continue;
        }
        if (q.elements.size() >= cap) {
          throw Error(ErrorCode::group_too_large,
                      "image group larger than " + std::to_string(cap));
        }
        q.index.emplace(p, q.elements.size());
        q.elements.push_back(std::move(p));
      }
    }
    return q;
  }

  ////////////////////////////////////////////////////////////////////////
  // Pipeline
  ////////////////////////////////////////////////////////////////////////

  BuildResult build_approximation(AmalgamSpec const& spec, BuildOptions const& options) {
    auto const start = std::chrono::steady_clock::now();
    auto const R     = options.radius;

    BuildResult r;
    auto&       cert = r.certificate;
    cert.radius      = R;
    cert.epsilon     = options.epsilon;

    auto t          = truncate_Z(spec, R, options.caps, options.exec);
    cert.truncation = t.modulus;
    auto F          = ball(spec, default_alphabet(spec), R, options.caps, options.exec);
    auto sep        = separate(t, F, seed_quotient(t, options.caps), options.search);

    cert.components       = sep.bundle.components;
    for (auto const& f : t.truncated.factors()) {
      cert.factor_generators.push_back(f.base()->generators());
    }
    cert.component_degree = sep.bundle.degree();
    cert.stats            = sep.stats;
    cert.ball_size        = F.size();
    auto finish           = [&] {
      cert.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if (!sep.unseparated.empty()) {
      for (auto i : sep.unseparated) {
        r.unseparated.push_back(F[i]);
      }
      cert.support = F;
      finish();
      return r;
    }

    auto combined = sep.bundle.combined();
    auto q        = image_group(t.truncated, combined, options.caps.max_degree);
    cert.image_order = q.order();

    // Support F followed by the new elements of F.F.
    std::size_t const                    nF = F.size();
    std::vector<NormalForm>              prods(nF * nF);
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (std::size_t i = 0; i < nF; ++i) {
        for (std::size_t j = 0; j < nF; ++j) {
          prods[i * nF + j] = multiply(spec, F[i], F[j]);
        }
      }
    } else {
      for (std::size_t i = 0; i < nF; ++i) {
        for (std::size_t j = 0; j < nF; ++j) {
          prods[i * nF + j] = multiply(spec, F[i], F[j]);
        }
      }
    }
    std::unordered_map<NormalForm, std::size_t, NormalFormHash> where;
    cert.support = F;
    for (std::size_t i = 0; i < nF; ++i) {
      where.emplace(F[i], i);
      cert.domain.finite_set.push_back(i);
    }
    for (auto& p : prods) {
      auto [it, fresh] = where.emplace(p, cert.support.size());
      if (fresh) {
        cert.support.push_back(p);
      }
      cert.domain.products.push_back(it->second);
    }

    // Stage group: the image group, through truncation then the quotient.
    auto const&              ts = t.truncated;
    std::vector<std::size_t> stage_of_q;
    std::unordered_map<std::size_t, std::size_t> stage_index;
    std::vector<std::size_t>                     assignment;
    for (auto const& s : cert.support) {
      auto qi = q.find(combined.image(ts, t.stage_map(s)));
      cert.stage_elements.push_back(qi);
      auto [it, fresh] = stage_index.emplace(qi, stage_of_q.size());
      if (fresh) {
        stage_of_q.push_back(qi);
      }
      assignment.push_back(it->second);
    }

    ApproxMap stage;
    stage.degree   = q.order();
    stage.identity = stage_index.at(0);
    stage.table.resize(stage_of_q.size());
    auto left_translation = [&](std::size_t k) {
      auto const&        g = q.elements[stage_of_q[k]];
      std::vector<Point> img(q.order());
      for (std::size_t x = 0; x < q.order(); ++x) {
        img[x] = static_cast<Point>(q.find(g * q.elements[x]));
      }
      return Permutation(std::move(img));
    };
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::size_t k = 0; k < stage_of_q.size(); ++k) {
        stage.table[k] = left_translation(k);
      }
    } else {
      for (std::size_t k = 0; k < stage_of_q.size(); ++k) {
        stage.table[k] = left_translation(k);
      }
    }
    for (auto qi : stage_of_q) {
      stage.support.push_back("q" + std::to_string(qi));
    }

    StageLaw law;
    law.identity = stage.identity;
    law.multiply = [&](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
      auto p  = q.find(q.elements[stage_of_q[a]] * q.elements[stage_of_q[b]]);
      auto it = stage_index.find(p);
      if (it == stage_index.end()) {
        return std::nullopt;
      }
      return it->second;
    };

    std::vector<std::string> labels;
    for (auto const& s : cert.support) {
      labels.push_back(to_string(spec, s));
    }
    cert.approx = pullback(stage, law, cert.domain, assignment, std::move(labels), 0);
    cert.report = verify(*cert.approx, cert.domain, options.epsilon, options.exec);
    r.complete  = true;
    finish();
    return r;
  }

  BuildResult build_approximation(GraphSpec const&    graph,
                                  Subgroup const&     h,
                                  BuildOptions const& options) {
    return build_approximation(decompose_graph(graph, h), options);
  }

}  // namespace sofic
