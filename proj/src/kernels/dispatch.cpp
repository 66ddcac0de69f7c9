#include <array>
#include <cstdlib>
#include <mutex>
#include <string>
#include <vector>

#include "ccurv/error.hpp"
#include "internal.hpp"

namespace ccurv::kernels {

#ifndef CCURV_HAVE_AVX2
const KernelTable* detail::avx2_table() { return nullptr; }
#endif

namespace {

constexpr std::array<std::string_view, kIntegrandCount> kNames = {
    "c6",  "c7",  "c8",  "c9",        "c10",        "c11",       "c12",
    "c13", "c14", "c15", "c16",       "c17",        "h1",        "h2",
    "mu1_first", "mu1_second", "mu1_third", "sphere_ss", "sphere_sc", "sphere_cs",
    "sphere_cross"};

bool cpu_has_avx2() {
#if defined(CCURV_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct SeriesStore {
  std::array<std::vector<double>, kIntegrandCount> coeffs;
  std::array<SeriesView, kIntegrandCount> views;

  SeriesStore() {
    for (std::size_t i = 0; i < kIntegrandCount; ++i) {
      const auto f = static_cast<Integrand>(i);
      const PowerSeries ps = detail::build_series(f);
      coeffs[i] = ps.coeffs();
      views[i] = {coeffs[i].data(), static_cast<int>(coeffs[i].size()), ps.valuation(),
                  detail::kSeriesBelow};
    }
  }
};

const SeriesStore& store() {
  static const SeriesStore s;
  return s;
}

}  // namespace

std::string_view name(Integrand f) { return kNames.at(static_cast<std::size_t>(f)); }

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
  return cpu_has_avx2() && detail::avx2_table() != nullptr;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw ConfigError("kernel ISA not available on this build or CPU");
  return isa == Isa::scalar ? detail::scalar_table() : *detail::avx2_table();
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    Isa isa = available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("CCURV_ISA")) {
      const std::string want(env);
      if (want == "scalar") isa = Isa::scalar;
      else if (want == "avx2" && available(Isa::avx2)) isa = Isa::avx2;
    }
    return &table(isa);
  }();
  return *chosen;
}

SeriesView series(Integrand f) { return store().views.at(static_cast<std::size_t>(f)); }

double evaluate(Integrand f, double tau) {
  double out = 0.0;
  detail::scalar_table().evaluate(f, &tau, &out, 1, series(f));
  return out;
}

void evaluate(Integrand f, const double* tau, double* out, std::size_t n) {
  active().evaluate(f, tau, out, n, series(f));
}

SupResult sup_abs(Integrand f, double lo, double hi, std::size_t n) {
  return active().sup_abs(f, lo, hi, n, series(f));
}

}  // namespace ccurv::kernels
