// Serial reference kernels against their OpenMP versions.  The second
// argument of every benchmark selects the execution: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "sofic/builder.hpp"
#include "sofic/embeddings.hpp"
#include "support.hpp"

using namespace sofic;

namespace {

  Execution exec_of(benchmark::State const& state) {
    return state.range(1) ? Execution::parallel : Execution::serial;
  }

  AmalgamSpec s4_double() {
    auto g = symmetric_group(4);
    auto h = Subgroup::generated_by(g, std::vector<Element>{1});
    return double_over(h, 2);
  }

  void BM_ball(benchmark::State& state) {
    auto spec = double_over(test::s3_h(), 2);
    auto R    = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
      benchmark::DoNotOptimize(ball(spec, default_alphabet(spec), R, {}, exec_of(state)));
    }
  }
  BENCHMARK(BM_ball)->ArgsProduct({{8, 10}, {0, 1}})->Unit(benchmark::kMillisecond);

  void BM_verify(benchmark::State& state) {
    BuildOptions o;
    o.radius = static_cast<std::size_t>(state.range(0));
    auto r   = build_approximation(double_over(test::s3_h(), 2), o);
    if (!r.complete) {
      state.SkipWithError("separation incomplete");
      return;
    }
    auto const& c = r.certificate;
    state.counters["degree"] = static_cast<double>(c.approx->degree);
    state.counters["ball"]   = static_cast<double>(c.ball_size);
    for (auto _ : state) {
      benchmark::DoNotOptimize(verify(*c.approx, c.domain, c.epsilon, exec_of(state)));
    }
  }
  BENCHMARK(BM_verify)->ArgsProduct({{4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

  void BM_embedding_report(benchmark::State& state) {
    auto h = test::s3_h();
    auto e = product_embedding(h, cyclic_group(5));
    auto R = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
      benchmark::DoNotOptimize(report(e, R, exec_of(state)));
    }
  }
  BENCHMARK(BM_embedding_report)->ArgsProduct({{3}, {0, 1}})->Unit(benchmark::kMillisecond);

  void BM_build(benchmark::State& state) {
    BuildOptions o;
    o.radius = static_cast<std::size_t>(state.range(0));
    o.exec   = exec_of(state);
    auto spec = s4_double();
    for (auto _ : state) {
      benchmark::DoNotOptimize(build_approximation(spec, o));
    }
  }
  BENCHMARK(BM_build)->ArgsProduct({{2}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
