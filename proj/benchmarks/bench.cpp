// Microbenchmarks for the layers the orbit-poset pipeline spends its time
// in: field arithmetic, matrix products, coset canonicalization, subgroup
// closure, a full conjugation orbit, and two end-to-end pipeline runs, plus
// the (near-free) symbolic classifier for contrast.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include <endorank/classify.hpp>
#include <endorank/field.hpp>
#include <endorank/groups.hpp>
#include <endorank/matgroup.hpp>
#include <endorank/posetrank.hpp>
#include <endorank/witnesses.hpp>

namespace {

using namespace endorank;

void BM_field_mul(benchmark::State& state) {
  const Field F = Field::make(7, 2);  // GF(49)
  FieldElem acc = 1;
  for (auto _ : state) {
    for (FieldElem a = 1; a < 49; ++a) acc = F.mul(acc, a);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 48);
}
BENCHMARK(BM_field_mul);

void BM_field_inv(benchmark::State& state) {
  const Field F = Field::make(7, 2);
  FieldElem acc = 1;
  for (auto _ : state) {
    for (FieldElem a = 1; a < 49; ++a) acc = F.inv(a);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 48);
}
BENCHMARK(BM_field_inv);

void BM_mat_mul(benchmark::State& state) {
  const Field F = Field::make(7, 1);
  Mat a = mat_identity(F, 3), b = mat_identity(F, 3);
  // Fixed nontrivial entries; the values only need to exercise the kernel.
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j) {
      a.at(i, j) = static_cast<FieldElem>((2 * i + 3 * j + 1) % 7);
      b.at(i, j) = static_cast<FieldElem>((5 * i + j + 2) % 7);
    }
  for (auto _ : state) {
    Mat c = mat_mul(F, a, b);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_mat_mul);

void BM_mat_canonicalize(benchmark::State& state) {
  const Field F = Field::make(7, 1);
  const CentralSpec central = CentralSpec::all_scalars(F);
  Mat m = mat_identity(F, 3);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j)
      m.at(i, j) = static_cast<FieldElem>((3 * i + 2 * j + 4) % 7);
  for (auto _ : state) {
    Mat c = canonicalize(F, central, m);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_mat_canonicalize);

void BM_subgroup_closure(benchmark::State& state) {
  // Closure of the extraspecial witness pair inside the degree-3 linear
  // group over GF(4): 27 elements from two generators.
  const GroupCtx ctx = build_group(descriptor_from_name("GL", 3, 4));
  const WitnessSetGL w = build_witness_gl(3, 4);
  const std::vector<Mat> gens = {w.x, w.b};
  for (auto _ : state) {
    ClosureResult res = subgroup_generated(ctx, gens);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_subgroup_closure);

void BM_conjugation_orbit(benchmark::State& state) {
  // One complete conjugation orbit of a rank-2 subgroup in PGL3(4).
  const GroupCtx ctx = build_group(descriptor_from_name("PGL", 3, 4));
  const WitnessSetGL w = build_witness_gl(3, 4);
  const std::vector<Mat> gens = {canonicalize(ctx.F, ctx.central, w.x),
                                 canonicalize(ctx.F, ctx.central, w.b)};
  const ClosureResult closure = subgroup_generated(ctx, gens);
  for (auto _ : state) {
    OrbitResult orbit = conjugation_orbit(ctx, closure.subgroup.key);
    benchmark::DoNotOptimize(orbit);
  }
}
BENCHMARK(BM_conjugation_orbit);

void BM_rank_pipeline_pgl2_5(benchmark::State& state) {
  const GroupDescriptor d = descriptor_from_name("PGL", 2, 5);
  for (auto _ : state) {
    RankReport rep = rank_of(d, 2);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_rank_pipeline_pgl2_5);

void BM_rank_pipeline_pgl3_4(benchmark::State& state) {
  const GroupDescriptor d = descriptor_from_name("PGL", 3, 4);
  for (auto _ : state) {
    RankReport rep = rank_of(d, 3);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_rank_pipeline_pgl3_4);

void BM_classify_psu3_8(benchmark::State& state) {
  const LieDescriptor d = descriptor_from_name("PSU3", std::uint64_t{8});
  for (auto _ : state) {
    ClassifyResult res = classify(d, 3);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_classify_psu3_8);

}  // namespace

BENCHMARK_MAIN();
