#include <benchmark/benchmark.h>

#include <fstream>
#include <random>

#include "ainfty/pipeline.hpp"

using namespace ainfty;

namespace {

nlohmann::json load_doc(const std::string& file) {
  std::ifstream in(std::string(AINFTY_PROBLEMS_DIR) + "/" + file);
  return nlohmann::json::parse(in);
}

IntMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-9, 9);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
  }
  return m;
}

TruncatedDga cup1_algebra() {
  Problem p = parse_problem(load_doc("cup1_bar.json"));
  return std::get<DgaInput>(p.input).dga;
}

}  // namespace

static void BM_Smith(benchmark::State& state) {
  IntMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(smith(m));
}
BENCHMARK(BM_Smith)->Arg(8)->Arg(16)->Arg(32);

static void BM_InvariantFactors(benchmark::State& state) {
  std::vector<Int> orders;
  for (int i = 0; i < state.range(0); ++i) orders.push_back(i % 3 == 0 ? 4 : 2);
  FpGroup g(orders);
  for (auto _ : state) benchmark::DoNotOptimize(g.invariant_factors());
}
BENCHMARK(BM_InvariantFactors)->Arg(100)->Arg(5000);

static void BM_QuotientHomology(benchmark::State& state) {
  Problem p = parse_problem(load_doc("torsion_quotient.json"));
  const auto& pres = std::get<AlgebraInput>(p.input).presentation;
  for (auto _ : state) {
    QuotientDGA q(pres, static_cast<int>(state.range(0)));
    Complex c = q.complex(false);
    for (int k = 0; k < c.max_degree(); ++k) benchmark::DoNotOptimize(c.homology(k));
  }
}
BENCHMARK(BM_QuotientHomology)->Arg(8)->Arg(13)->Unit(benchmark::kMillisecond);

static void BM_BarProductTable(benchmark::State& state) {
  TruncatedDga a = cup1_algebra();
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BarConstruction bar(a, degree);
    std::size_t terms = 0;
    for (const auto& u : bar.words_up_to(degree)) {
      for (const auto& v : bar.words_up_to(degree - bar.degree(u))) terms += bar.mu(u, v).size();
    }
    benchmark::DoNotOptimize(terms);
  }
}
BENCHMARK(BM_BarProductTable)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_TransferTorsion(benchmark::State& state) {
  Problem p = parse_problem(load_doc("torsion_quotient.json"));
  QuotientDGA q(std::get<AlgebraInput>(p.input).presentation, p.max_degree);
  for (auto _ : state) {
    Transfer t(target_from_quotient(q, true), p.pins);
    t.induce_product();
    for (int m = 3; m <= 5; ++m) t.operadic_step(m);
    benchmark::DoNotOptimize(t.a_infinity_check(5));
  }
}
BENCHMARK(BM_TransferTorsion)->Unit(benchmark::kMillisecond);

static void BM_Omega22(benchmark::State& state) {
  Problem p = parse_problem(load_doc("cup1_bar.json"));
  auto bar = std::make_shared<const BarConstruction>(std::get<DgaInput>(p.input).dga, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Transfer t(target_from_bar(bar), p.pins);
    t.induce_product();
    t.induce_coproduct();
    benchmark::DoNotOptimize(t.omega22_step());
  }
}
BENCHMARK(BM_Omega22)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
