#include <benchmark/benchmark.h>

#include "ffbias/census.hpp"
#include "ffbias/singular.hpp"

using namespace ffbias;

namespace {

MultiPoly hyperbolic(const FieldPtr& K, unsigned r) {
  MultiPoly out = MultiPoly::zero(K, 2 * r);
  for (unsigned i = 0; i < r; ++i) {
    MultiPoly::Exponents e(2 * r, 0);
    e[2 * i] = 1;
    e[2 * i + 1] = 1;
    out = out + MultiPoly::monomial(K, 2 * r, e, K->one());
  }
  return out;
}

void BM_field_mul_table(benchmark::State& state) {
  FieldPtr K = Field::extend(Field::make(3, 1), 2);
  std::uint32_t a = 5, b = 7;
  for (auto _ : state) {
    a = K->idx_mul(a, b);
    b = K->idx_add(b, 1 % 9);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_field_mul_table);

void BM_field_mul_generic(benchmark::State& state) {
  // beyond the table threshold: polynomial arithmetic per op
  FieldPtr K = Field::extend(Field::make(3, 1), 10);
  std::uint32_t a = 12345, b = 6789;
  for (auto _ : state) {
    a = K->idx_mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_field_mul_generic);

void BM_census_hyperbolic(benchmark::State& state) {
  unsigned r = (unsigned)state.range(0);
  unsigned n = (unsigned)state.range(1);
  FieldPtr F3 = Field::make(3, 1);
  MultiPoly Q = hyperbolic(F3, r);
  std::uint64_t points = 1;
  for (unsigned i = 0; i < n * 2 * r; ++i) points *= 3;
  for (auto _ : state) {
    FiberCensus c = census(Q, n, 1000000000, 1);
    benchmark::DoNotOptimize(c.counts.data());
  }
  state.SetItemsProcessed((std::int64_t)(state.iterations() * points));
}
BENCHMARK(BM_census_hyperbolic)->Args({2, 2})->Args({3, 2});

void BM_census_workers(benchmark::State& state) {
  unsigned workers = (unsigned)state.range(0);
  FieldPtr F3 = Field::make(3, 1);
  MultiPoly Q = hyperbolic(F3, 3);
  for (auto _ : state) {
    FiberCensus c = census(Q, 2, 1000000000, workers);
    benchmark::DoNotOptimize(c.counts.data());
  }
  state.SetItemsProcessed((std::int64_t)(state.iterations() * 531441));
}
BENCHMARK(BM_census_workers)->Arg(1)->Arg(2)->Arg(4);

void BM_naive_eval_sweep(benchmark::State& state) {
  // term-by-term evaluation over the same grid as the compiled sweep
  FieldPtr F3 = Field::make(3, 1);
  MultiPoly Q = hyperbolic(F3, 2);
  FieldPtr K = Field::extend(F3, 1);
  for (auto _ : state) {
    std::vector<std::uint64_t> counts(3, 0);
    std::vector<FieldElement> pt(4, K->zero());
    for (std::uint32_t a = 0; a < 3; ++a)
      for (std::uint32_t b = 0; b < 3; ++b)
        for (std::uint32_t c = 0; c < 3; ++c)
          for (std::uint32_t d = 0; d < 3; ++d) {
            pt[0] = K->element(a);
            pt[1] = K->element(b);
            pt[2] = K->element(c);
            pt[3] = K->element(d);
            ++counts[Q.evaluate(pt).index()];
          }
    benchmark::DoNotOptimize(counts.data());
  }
  state.SetItemsProcessed((std::int64_t)(state.iterations() * 81));
}
BENCHMARK(BM_naive_eval_sweep);

void BM_singular_sweep(benchmark::State& state) {
  FieldPtr F5 = Field::make(5, 1);
  MultiPoly H = MultiPoly::parse("x0^3 + x1^3 + x2^3 + 2*x0*x1*x2", F5, 3);
  for (auto _ : state) {
    std::uint64_t c = singular_points(H, 2, 1000000000, 1);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_singular_sweep);

}  // namespace

BENCHMARK_MAIN();
