#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sofic/error.hpp"
#include "sofic/serialize.hpp"
#include "support.hpp"

using namespace sofic;
using namespace sofic::test;
using io::Json;

namespace {
  std::string data(std::string const& name) {
    return std::string(SOFIC_TEST_DATA) + "/" + name;
  }

  struct Run {
    int  code;
    Json doc;
    Json error;
  };

  Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int                code = cli::run(args, out, err);
    Run                r{code, nullptr, nullptr};
    if (!out.str().empty() && out.str().front() == '{') {
      r.doc = Json::parse(out.str());
    }
    if (!err.str().empty()) {
      r.error = Json::parse(err.str());
    }
    return r;
  }

  std::string temp_path(std::string const& name) {
    return (std::filesystem::temp_directory_path() / ("sofic_test_" + name)).string();
  }

  Json read(std::string const& path) {
    std::ifstream in(path);
    return Json::parse(in);
  }

  void write(std::string const& path, Json const& j) {
    std::ofstream(path) << j.dump();
  }

  ErrorCode code_of(auto&& f) {
    try {
      f();
    } catch (Error const& e) {
      return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::invalid_argument;
  }
}  // namespace

TEST_SUITE("serialize") {
  TEST_CASE("rationals") {
    CHECK(io::rational_from_json(Json("3/6"), "") == Rational(1, 2));
    CHECK(io::rational_from_json(Json("-2"), "") == Rational(-2));
    CHECK(io::to_json(Rational(2, 4)) == Json("1/2"));
    CHECK(io::to_json(Rational(0)) == Json("0/1"));
    for (auto bad : {"x", "1/0", "", "1/2/3"}) {
      CAPTURE(bad);
      CHECK(code_of([&] { io::rational_from_json(Json(bad), "/eps"); }) == ErrorCode::parse_error);
    }
  }

  TEST_CASE("groups round-trip through tables") {
    Caps caps;
    for (auto const& [name, g] : corpus()) {
      CAPTURE(name);
      auto j    = io::group_to_json(*g);
      auto back = io::group_from_json(j, "/group", caps);
      CHECK(back->table() == g->table());
      CHECK(back->label(1 % g->order()) == g->label(1 % g->order()));
    }
    auto s = io::group_from_json(Json{{"symmetric", 4}}, "/g", caps);
    CHECK(s->order() == 24);
    auto c = io::group_from_json(Json{{"cyclic", 7}}, "/g", caps);
    CHECK(c->order() == 7);
    auto p = io::group_from_json(Json::parse(R"({"perm_gens": [[1,0,2],[1,2,0]], "degree": 3})"), "/g", caps);
    CHECK(p->order() == 6);
  }

  TEST_CASE("parse errors carry a location") {
    Caps caps;
    auto msg = [](auto&& f) -> std::string {
      try {
        f();
      } catch (Error const& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        return e.what();
      }
      return "";
    };
    auto m = msg([&] { io::group_from_json(Json::parse(R"({"table": [[0,1],[1]]})"), "/group", caps); });
    CHECK(m.find("/group/table/1") != std::string::npos);
    m = msg([&] { io::group_from_json(Json::parse(R"({"tabel": []})"), "/group", caps); });
    CHECK(m.find("/group") != std::string::npos);

    auto spec = double_over(s3_h(), 2);
    m = msg([&] { io::word_from_json(spec, Json::parse(R"([[0, 1], [5, 1]])"), "/words/0"); });
    CHECK(m.find("/words/0/1") != std::string::npos);
    m = msg([&] { io::word_from_json(spec, Json::parse(R"([[0, 99]])"), "/words/0"); });
    CHECK(m.find("/words/0/0") != std::string::npos);

    // a table that is not a group is rejected by validation, not parsing
    CHECK(code_of([&] { io::group_from_json(Json::parse(R"({"table": [[0,1],[1,1]]})"), "/g", caps); })
          == ErrorCode::not_a_group);
    Caps tiny;
    tiny.max_group_order = 10;
    CHECK(code_of([&] { io::group_from_json(Json{{"symmetric", 4}}, "/g", tiny); }) == ErrorCode::group_too_large);
  }

  TEST_CASE("words and normal forms round-trip") {
    auto h = s3_h();
    for (auto const& spec : {double_over(h, 2), decompose_graph(one_loop(), h)}) {
      for (auto const& x : ball(spec, default_alphabet(spec), 3)) {
        auto j = io::to_json(spec, x);
        CHECK(io::normal_form_from_json(spec, j, "") == x);
        CHECK(normalize(spec, io::word_from_json(spec, j["letters"], "")).letters == x.letters);
      }
    }
    // factors may be named
    auto spec = double_over(h, 2);
    auto w    = io::word_from_json(spec, Json::array({Json::array({spec.factor(1).name(), 2})}), "");
    CHECK(w == Word{L(1, 2)});
  }

  TEST_CASE("subgroups and graphs") {
    auto g = s3_h().parent();
    auto a = io::subgroup_from_json(Json(Subgroup::generated_by(g, std::vector<Element>{2}).elements()), g, "/s");
    auto b = io::subgroup_from_json(Json::parse(R"({"generators": [2]})"), g, "/s");
    CHECK(a.elements() == b.elements());
    CHECK(code_of([&] { io::subgroup_from_json(Json::parse("[0, 1, 2]"), g, "/s"); }) == ErrorCode::not_a_subgroup);

    auto gr = io::graph_from_json(Json::parse(R"({"vertices": [0, 1], "edges": [[0, 1], [1, 1]]})"), "/graph");
    CHECK(gr.vertices.size() == 2);
    CHECK(gr.edges.size() == 2);
  }

  TEST_CASE("approximations and reports round-trip") {
    BuildOptions o;
    o.radius  = 2;
    auto spec = decompose_graph(one_loop(), s3_h());
    auto r    = build_approximation(spec, o);
    REQUIRE(r.complete);
    auto cert = io::certificate_to_json(r, spec, "abc");
    CHECK(cert["complete"] == true);
    CHECK(cert["truncation_N"] == 5);

    auto doc = io::approx_from_json(Json::parse(cert.dump()));
    CHECK(doc.map.table == r.certificate.approx->table);
    CHECK(doc.map.identity == r.certificate.approx->identity);
    CHECK(doc.domain.finite_set == r.certificate.domain.finite_set);
    CHECK(doc.domain.products == r.certificate.domain.products);
    REQUIRE(doc.report.has_value());
    CHECK(*doc.report == *r.certificate.report);
    CHECK(doc.epsilon == r.certificate.epsilon);
    CHECK(verify(doc.map, doc.domain, *doc.epsilon) == *doc.report);

    // a report with witnesses
    DefectReport d;
    d.unital       = true;
    d.mult_defect  = Rational(1, 3);
    d.free_defect  = Rational(1, 9);
    d.epsilon      = Rational(1, 100);
    d.passed       = false;
    d.mult_witness = std::pair<std::size_t, std::size_t>{2, 5};
    d.free_witness = 4;
    CHECK(io::report_from_json(io::to_json(d), "") == d);

    // broken tables
    auto bad = cert;
    bad["approx"]["table"][1] = Json::array({0, 0});
    CHECK(code_of([&] { io::approx_from_json(bad); }) == ErrorCode::parse_error);
    bad = cert;
    bad["approx"]["products"][0].erase(0);
    CHECK(code_of([&] { io::approx_from_json(bad); }) == ErrorCode::parse_error);
    bad = cert;
    bad["approx"]["products"][0][0] = 1u << 30;
    CHECK(code_of([&] { io::approx_from_json(bad); }) == ErrorCode::parse_error);
  }

  TEST_CASE("digest ignores key order") {
    auto a = Json::parse(R"({"x": 1, "y": [1, 2]})");
    auto b = Json::parse(R"({"y": [1, 2], "x": 1})");
    CHECK(io::digest(a) == io::digest(b));
    CHECK(io::digest(a).size() == 64);
    CHECK(io::digest(a) != io::digest(Json::parse(R"({"x": 2, "y": [1, 2]})")));
    // SHA-256 of "{}"
    CHECK(io::digest(Json::object()) == "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
  }
}

TEST_SUITE("cli") {
  TEST_CASE("normalize") {
    auto r = run({"normalize", data("s3_double.json")});
    REQUIRE(r.code == cli::exit_ok);
    auto const& forms = r.doc["forms"];
    REQUIRE(forms.size() == 4);
    // empty word
    CHECK(forms[0]["head"] == 0);
    CHECK(forms[0]["letters"].empty());
    // (0,1)(0,1) collapses into the head
    CHECK(forms[2]["letters"].empty());
    CHECK(r.doc["meta"]["command"] == "normalize");
    CHECK(r.doc["meta"]["version"] == "0.1.0");
  }

  TEST_CASE("ball matches the library") {
    auto r = run({"ball", data("s3_double.json"), "--radius", "2"});
    REQUIRE(r.code == cli::exit_ok);
    auto spec = double_over(s3_h(), 2);
    CHECK(r.doc["size"] == ball(spec, default_alphabet(spec), 2).size());
    CHECK(r.doc["elements"].size() == r.doc["size"].get<std::size_t>());
  }

  TEST_CASE("embed") {
    for (auto f : {"s3_sub_amalgam.json", "s3_product.json", "s3_line.json"}) {
      CAPTURE(f);
      auto r = run({"embed", data(f)});
      REQUIRE(r.code == cli::exit_ok);
      CHECK(r.doc["multiplicative"] == true);
      CHECK(r.doc["injective"] == true);
      CHECK(r.doc["radius"] == 2);
    }
    auto s = run({"embed", data("s3_stagewise.json")});
    REQUIRE(s.code == cli::exit_ok);
    for (auto const& w : s.doc["words"]) {
      for (auto const& st : w["stages"]) {
        CHECK(st["standard"] == true);
      }
    }
    // the older names still select the same maps
    auto alias = run({"embed", data("s3_sub_amalgam.json"), "--embedding", "lemma23"});
    CHECK(alias.code == cli::exit_ok);
    CHECK(alias.doc["embedding"] == "sub-amalgam");
    auto bad = run({"embed", data("s3_double.json"), "--embedding", "nope"});
    CHECK(bad.code == cli::exit_usage);
    CHECK(bad.error["error"]["code"] == "parse_error");
  }

  TEST_CASE("build then verify") {
    auto path = temp_path("cert.json");
    auto b    = run({"build", data("s3_double.json"), "--out", path});
    REQUIRE(b.code == cli::exit_ok);
    auto cert = read(path);
    CHECK(cert["complete"] == true);
    CHECK(cert["report"]["mult_defect"] == "0/1");
    CHECK(cert["report"]["free_defect"] == "0/1");
    CHECK(cert["input_digest"] == io::digest(read(data("s3_double.json"))));

    auto v = run({"verify", path});
    CHECK(v.code == cli::exit_ok);
    CHECK(v.doc["reproduced"] == true);
    CHECK(v.doc["corruption"].is_null());

    // a different epsilon skips reproduction
    auto e = run({"verify", path, "--epsilon", "1/1000"});
    CHECK(e.code == cli::exit_ok);
    CHECK(e.doc["reproduced"].is_null());

    // corruption large enough to fail
    auto c = run({"verify", path, "--corrupt", "3/10", "--seed", "1", "--epsilon", "1/100"});
    CHECK(c.code == cli::exit_violation);
    CHECK(c.doc["report"]["passed"] == false);
    CHECK(c.doc["corruption"]["seed"] == 1);

    // a tampered report no longer reproduces
    auto tampered = cert;
    tampered["report"]["free_defect"] = "1/2";
    auto tpath = temp_path("tampered.json");
    write(tpath, tampered);
    auto t = run({"verify", tpath});
    CHECK(t.code == cli::exit_violation);
    CHECK(t.doc["reproduced"] == false);

    // incomplete separation
    auto i = run({"build", data("s3_double.json"), "--budget", "0"});
    CHECK(i.code == cli::exit_violation);
    CHECK(i.doc["complete"] == false);
    CHECK_FALSE(i.doc["unseparated"].empty());

    std::filesystem::remove(path);
    std::filesystem::remove(tpath);
  }

  TEST_CASE("build is deterministic apart from meta") {
    auto a = run({"build", data("s3_loop.json")});
    auto b = run({"build", data("s3_loop.json"), "--serial"});
    REQUIRE(a.code == cli::exit_ok);
    REQUIRE(b.code == cli::exit_ok);
    a.doc.erase("meta");
    b.doc.erase("meta");
    CHECK(a.doc == b.doc);
    CHECK(a.doc["truncation_N"] == 5);
  }

  TEST_CASE("core") {
    auto r = run({"core", data("s3_core.json")});
    REQUIRE(r.code == cli::exit_ok);
    CHECK(r.doc["core"] == Json::array({0}));
    CHECK(r.doc["core_is_normal"] == true);
    CHECK(r.doc["membership_agrees"] == true);
    CHECK(r.doc["membership"].size() == 6);
  }

  TEST_CASE("usage and input errors") {
    CHECK(run({}).code == cli::exit_usage);
    CHECK(run({"frobnicate", data("s3_double.json")}).code == cli::exit_usage);
    CHECK(run({"build", data("s3_double.json"), "--radius", "x"}).code == cli::exit_usage);

    auto missing = run({"build", data("does_not_exist.json")});
    CHECK(missing.code == cli::exit_usage);
    CHECK(missing.error["error"]["code"] == "parse_error");

    auto path = temp_path("broken.json");
    std::ofstream(path) << "{ not json";
    auto broken = run({"normalize", path});
    CHECK(broken.code == cli::exit_usage);
    CHECK(broken.error["error"]["code"] == "parse_error");

    write(path, Json::parse(R"({"group": {"cyclic": 4}, "subgroup": [0, 1]})"));
    auto sub = run({"normalize", path});
    CHECK(sub.code == cli::exit_usage);
    CHECK(sub.error["error"]["code"] == "not_a_subgroup");

    auto cap = run({"build", data("s3_loop.json"), "--cap-degree", "10"});
    CHECK(cap.code == cli::exit_usage);
    CHECK(cap.error["error"]["code"] == "degree_too_large");
    std::filesystem::remove(path);
  }
}
