#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sofic/builder.hpp"
#include "sofic/embeddings.hpp"
#include "sofic/error.hpp"
#include "sofic/serialize.hpp"

namespace sofic::cli {

  namespace {
    using io::Json;

    constexpr char const* tool_version = "0.1.0";

    struct Flags {
      std::string                command;
      std::string                instance;
      std::optional<std::size_t> radius;
      std::optional<std::string> epsilon;
      std::optional<std::uint64_t> budget;
      std::uint64_t              seed = 0;
      std::optional<std::size_t> cap_degree;
      std::optional<std::string> out;
      std::optional<std::string> embedding;
      std::optional<std::string> corrupt;
      bool                       serial = false;
    };

    struct Outcome {
      Json body;
      int  code = exit_ok;
    };

    // Everything a command needs from the instance file, resolved once.
    struct Context {
      Flags const& flags;
      Json         instance;
      Caps         caps;
      Execution    exec = Execution::parallel;

      std::size_t radius(std::size_t fallback) const {
        if (flags.radius) {
          return *flags.radius;
        }
        if (instance.contains("radius")) {
          return instance["radius"].get<std::size_t>();
        }
        return fallback;
      }

      std::optional<Rational> epsilon() const {
        if (flags.epsilon) {
          return io::rational_from_json(Json(*flags.epsilon), "--epsilon");
        }
        if (instance.contains("epsilon")) {
          return io::rational_from_json(instance["epsilon"], "/epsilon");
        }
        return std::nullopt;
      }

      std::size_t copies() const {
        return instance.contains("copies") ? instance["copies"].get<std::size_t>() : 2;
      }

      GroupPtr group() const {
        return io::group_from_json(need("group"), "/group", caps);
      }

      Subgroup subgroup(GroupPtr const& g) const {
        return io::subgroup_from_json(need("subgroup"), g, "/subgroup");
      }

      // The graph double when a graph is given, else `copies` copies of G over H.
      AmalgamSpec spec() const {
        auto g = group();
        auto h = subgroup(g);
        if (instance.contains("graph")) {
          return decompose_graph(io::graph_from_json(instance["graph"], "/graph"), h);
        }
        return double_over(h, copies());
      }

      Json const& need(char const* key) const {
        if (!instance.contains(key)) {
          throw Error(ErrorCode::parse_error, std::string("at /: missing \"") + key + "\"");
        }
        return instance[key];
      }
    };

    Json load(std::string const& path) {
      std::ifstream in(path);
      if (!in) {
        throw Error(ErrorCode::parse_error, "cannot open " + path);
      }
      try {
        return Json::parse(in);
      } catch (nlohmann::json::parse_error const& e) {
        throw Error(ErrorCode::parse_error, path + ": " + e.what());
      }
    }

    Caps caps_of(Json const& instance, Flags const& flags) {
      Caps c;
      if (instance.contains("caps")) {
        auto const& j = instance["caps"];
        c.max_group_order = j.value("max_group_order", c.max_group_order);
        c.max_degree      = j.value("max_degree", c.max_degree);
        c.max_ball_size   = j.value("max_ball_size", c.max_ball_size);
      }
      if (flags.cap_degree) {
        c.max_degree = *flags.cap_degree;
      }
      return c;
    }

    ////////////////////////////////////////////////////////////////////////
    // Commands
    ////////////////////////////////////////////////////////////////////////

    Outcome cmd_normalize(Context const& ctx) {
      auto spec  = ctx.spec();
      auto words = ctx.instance.contains("words") ? ctx.instance["words"] : Json::array();
      Json forms = Json::array();
      for (std::size_t i = 0; i < words.size(); ++i) {
        auto w = io::word_from_json(spec, words[i], "/words/" + std::to_string(i));
        forms.push_back(io::to_json(spec, normalize(spec, w)));
      }
      return {Json{{"spec", io::spec_to_json(spec)}, {"forms", std::move(forms)}}};
    }

    Outcome cmd_ball(Context const& ctx) {
      auto spec     = ctx.spec();
      auto r        = ctx.radius(1);
      auto elements = ball(spec, default_alphabet(spec), r, ctx.caps, ctx.exec);
      Json list     = Json::array();
      for (auto const& nf : elements) {
        list.push_back(io::to_json(spec, nf));
      }
      return {Json{{"spec", io::spec_to_json(spec)},
                   {"radius", r},
                   {"size", elements.size()},
                   {"elements", std::move(list)}}};
    }

    Outcome embed_stagewise(Context const& ctx, GroupPtr const& g, Subgroup const& h) {
      auto stages = io::chain_from_json(ctx.need("chain"), g, "/chain");
      CoSoficChain chain(h, std::move(stages));
      auto         e     = stagewise_embedding(h, stage_data_from_chain(chain), ctx.copies());
      auto         words = ctx.instance.contains("words") ? ctx.instance["words"] : Json::array();
      Json         out   = Json::array();
      bool         all_standard = true;
      for (std::size_t i = 0; i < words.size(); ++i) {
        auto nf  = normalize(e.domain, io::word_from_json(e.domain, words[i], "/words/" + std::to_string(i)));
        Json per = Json::array();
        auto sw  = stagewise_embed(e, nf);
        for (std::size_t k = 0; k < sw.size(); ++k) {
          all_standard = all_standard && sw[k].standard;
          per.push_back({{"stage", k},
                         {"head", sw[k].head},
                         {"letters", io::to_json(e.stage_specs[k], sw[k].letters)},
                         {"standard", sw[k].standard}});
        }
        out.push_back({{"word", io::to_json(e.domain, nf)}, {"stages", std::move(per)}});
      }
      return {Json{{"embedding", "stagewise"}, {"chain", io::to_json(chain)}, {"words", std::move(out)}},
              all_standard ? exit_ok : exit_violation};
    }

    Outcome cmd_embed(Context const& ctx) {
      std::string name = ctx.flags.embedding ? *ctx.flags.embedding
                                             : ctx.instance.value("embedding", std::string());
      auto        g    = ctx.group();
      auto        h    = ctx.subgroup(g);
      auto        r    = ctx.radius(2);
      EmbeddingReport rep;
      // lemma23 / lemma24 are the older names of the first two
      if (name == "sub-amalgam" || name == "lemma23") {
        auto k = io::subgroup_from_json(ctx.need("k_subgroup"), g, "/k_subgroup");
        rep    = report(sub_amalgam_embedding(h, k, ctx.copies()), r, ctx.exec);
      } else if (name == "product" || name == "lemma24") {
        auto k = io::group_from_json(ctx.need("k_group"), "/k_group", ctx.caps);
        rep    = report(product_embedding(h, k, ctx.copies()), r, ctx.exec);
      } else if (name == "double-to-line") {
        auto graph = io::graph_from_json(ctx.need("graph"), "/graph");
        rep        = report(line_embedding(decompose_graph(graph, h)), r, ctx.exec);
      } else if (name == "stagewise") {
        return embed_stagewise(ctx, g, h);
      } else {
        throw Error(ErrorCode::parse_error,
                    "unknown embedding \"" + name + "\" (sub-amalgam, product, double-to-line, stagewise)");
      }
      bool ok = rep.multiplicative && rep.injective;
      return {io::to_json(rep), ok ? exit_ok : exit_violation};
    }

    Outcome cmd_build(Context const& ctx) {
      BuildOptions opts;
      opts.radius  = ctx.radius(1);
      opts.epsilon = ctx.epsilon().value_or(Rational(1, 10));
      opts.caps    = ctx.caps;
      opts.exec    = ctx.exec;
      if (ctx.flags.budget) {
        opts.search.budget = *ctx.flags.budget;
      } else if (ctx.instance.contains("budget")) {
        opts.search.budget = ctx.instance["budget"].get<std::uint64_t>();
      }
      auto spec   = ctx.spec();
      auto result = build_approximation(spec, opts);
      auto doc    = io::certificate_to_json(result, spec, io::digest(ctx.instance));
      bool ok     = result.complete && result.certificate.report && result.certificate.report->passed;
      return {std::move(doc), ok ? exit_ok : exit_violation};
    }

    Outcome cmd_verify(Context const& ctx) {
      auto doc = io::approx_from_json(ctx.instance);
      std::optional<Rational> eps;
      if (ctx.flags.epsilon) {
        eps = io::rational_from_json(Json(*ctx.flags.epsilon), "--epsilon");
      } else if (doc.epsilon) {
        eps = doc.epsilon;
      } else if (doc.report) {
        eps = doc.report->epsilon;
      } else {
        throw Error(ErrorCode::parse_error, "at /: no epsilon in the document and no --epsilon");
      }
      auto map = doc.map;
      Json corruption(nullptr);
      if (ctx.flags.corrupt) {
        auto delta = io::rational_from_json(Json(*ctx.flags.corrupt), "--corrupt");
        map        = corrupt(map, delta, ctx.flags.seed);
        corruption = {{"delta", io::to_json(delta)},
                      {"seed", ctx.flags.seed},
                      {"points", ceil_times(delta, static_cast<std::int64_t>(map.degree))}};
      }
      auto rep = verify(map, doc.domain, *eps, ctx.exec);
      // Reproduction is only meaningful against the untouched map at the
      // recorded epsilon.
      Json reproduced(nullptr);
      if (doc.report && !ctx.flags.corrupt && doc.report->epsilon == *eps) {
        reproduced = (*doc.report == rep);
      }
      bool ok = rep.passed && (reproduced.is_null() || reproduced.get<bool>());
      return {Json{{"report", io::to_json(rep)},
                   {"reproduced", std::move(reproduced)},
                   {"corruption", std::move(corruption)}},
              ok ? exit_ok : exit_violation};
    }

    Outcome cmd_core(Context const& ctx) {
      auto g    = ctx.group();
      auto h    = ctx.subgroup(g);
      auto core = normal_core(h);
      auto chain = ctx.instance.contains("chain")
                       ? CoSoficChain(h, io::chain_from_json(ctx.instance["chain"], g, "/chain"))
                       : CoSoficChain::from_normal_core(h);
      CoSoficMaps maps(chain);
      Json        membership = Json::array();
      bool        agree      = true;
      for (Element x = 0; x < g->order(); ++x) {
        bool m = maps.member(x);
        agree  = agree && m == h.contains(x);
        membership.push_back({{"element", x}, {"label", g->label(x)}, {"member", m}});
      }
      return {Json{{"core", core.elements()},
                   {"core_is_normal", core.is_normal()},
                   {"chain", io::to_json(chain)},
                   {"membership", std::move(membership)},
                   {"membership_agrees", agree}},
              agree ? exit_ok : exit_violation};
    }

    std::string utc_now() {
      auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::tm tm{};
      gmtime_r(&t, &tm);
      std::ostringstream s;
      s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
      return s.str();
    }

    Json error_doc(std::string_view code, std::string const& message) {
      std::string key(code);
      std::replace(key.begin(), key.end(), ' ', '_');
      return Json{{"error", {{"code", key}, {"message", message}}}};
    }
  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sofic approximations of graph-of-groups doubles", "sofic"};
    Flags    f;
    app.add_option("command", f.command, "normalize | ball | embed | build | verify | core")
        ->required()
        ->check(CLI::IsMember({"normalize", "ball", "embed", "build", "verify", "core"}));
    app.add_option("instance", f.instance, "instance JSON (a certificate for verify)")->required();
    app.add_option("--radius", f.radius, "word-length radius R");
    app.add_option("--epsilon", f.epsilon, "epsilon as \"p/q\"");
    app.add_option("--budget", f.budget, "separation search node budget");
    app.add_option("--seed", f.seed, "seed for --corrupt");
    app.add_option("--cap-degree", f.cap_degree, "maximum permutation degree");
    app.add_option("--out", f.out, "write the document here instead of stdout");
    app.add_option("--embedding", f.embedding, "sub-amalgam | product | double-to-line | stagewise");
    app.add_option("--corrupt", f.corrupt, "verify: corrupt ceil(delta*n) points per image first");
    app.add_flag("--serial", f.serial, "use the serial reference kernels");

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return exit_ok;
    } catch (CLI::ParseError const& e) {
      err << error_doc("usage", e.what()).dump(2) << "\n";
      return exit_usage;
    }

    auto const start = std::chrono::steady_clock::now();
    Outcome    outcome;
    try {
      auto    instance = load(f.instance);
      Context ctx{f, instance, caps_of(instance, f), f.serial ? Execution::serial : Execution::parallel};
      if (f.command == "normalize") {
        outcome = cmd_normalize(ctx);
      } else if (f.command == "ball") {
        outcome = cmd_ball(ctx);
      } else if (f.command == "embed") {
        outcome = cmd_embed(ctx);
      } else if (f.command == "build") {
        outcome = cmd_build(ctx);
      } else if (f.command == "verify") {
        outcome = cmd_verify(ctx);
      } else {
        outcome = cmd_core(ctx);
      }
    } catch (Error const& e) {
      err << error_doc(to_string(e.code()), e.what()).dump(2) << "\n";
      return exit_usage;
    } catch (nlohmann::json::exception const& e) {
      err << error_doc("parse_error", e.what()).dump(2) << "\n";
      return exit_usage;
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    Json doc{{"meta",
              {{"tool", "sofic"},
               {"version", tool_version},
               {"command", f.command},
               {"generated_at", utc_now()},
               {"seconds", elapsed.count()}}}};
    for (auto& [k, v] : outcome.body.items()) {
      doc[k] = std::move(v);
    }
    auto text = doc.dump(2) + "\n";
    if (f.out) {
      std::ofstream file(*f.out);
      if (!file) {
        err << error_doc("io", "cannot write " + *f.out).dump(2) << "\n";
        return exit_usage;
      }
      file << text;
    } else {
      out << text;
    }
    return outcome.code;
  }

}  // namespace sofic::cli
