#include <doctest.h>

#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hcivalue/kernels.hpp"
#include "oracles.hpp"

namespace k = hcivalue::kernels;

namespace {

std::vector<double> random_simplex(std::size_t n, std::uint64_t seed, double zero_fraction = 0.0) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution zero(zero_fraction);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = zero(rng) ? 0.0 : draw(rng));
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

TEST_CASE("serial and parallel reductions agree") {
  for (std::size_t n : {1u, 7u, 4096u, 4097u, 100000u, 1u << 18}) {
    CAPTURE(n);
    const auto p = random_simplex(n, n, 0.1);
    const auto q = random_simplex(n, n + 1);
    CHECK(k::parallel::sum(p) == doctest::Approx(k::serial::sum(p)).epsilon(1e-12));
    CHECK(k::parallel::entropy_terms(p) == doctest::Approx(k::serial::entropy_terms(p)).epsilon(1e-12));
    CHECK(k::parallel::kl_terms(p, q) == doctest::Approx(k::serial::kl_terms(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("serial entropy kernel matches the long-double oracle") {
  const auto p = random_simplex(50000, 3, 0.2);
  CHECK(k::serial::entropy_terms(p) == doctest::Approx(oracle::entropy(p)).epsilon(1e-12));
}

TEST_CASE("mutual information kernels agree with H(X)+H(Y)-H(X,Y)") {
  const std::size_t rows = 300;
  const std::size_t cols = 250;
  const auto joint = random_simplex(rows * cols, 11, 0.3);
  std::vector<double> r(rows, 0.0), c(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      r[i] += joint[i * cols + j];
      c[j] += joint[i * cols + j];
    }
  }
  const double serial = k::serial::mutual_information_terms(joint, r, c);
  CHECK(k::parallel::mutual_information_terms(joint, r, c) == doctest::Approx(serial).epsilon(1e-12));
  CHECK(serial == doctest::Approx(oracle::mutual_information(joint, rows, cols)).epsilon(1e-9));
}

TEST_CASE("parallel reductions do not depend on the thread count") {
  const auto p = random_simplex(1u << 17, 5, 0.1);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = k::parallel::entropy_terms(p);
  omp_set_num_threads(4);
  const double four = k::parallel::entropy_terms(p);
  omp_set_num_threads(saved);
  CHECK(one == four);
#else
  CHECK(k::parallel::entropy_terms(p) == k::parallel::entropy_terms(p));
#endif
}

TEST_CASE("bernoulli and outer products match the serial reference bit for bit") {
  const std::vector<double> on = {0.1, 0.5, 0.9, 0.25, 0.75, 0.3, 0.6, 0.5, 0.5, 0.2, 0.8, 0.4, 0.45, 0.55, 0.35, 0.65};
  std::vector<double> a(std::size_t{1} << on.size()), b(a.size());
  k::serial::bernoulli_product(on, a);
  k::parallel::bernoulli_product(on, b);
  CHECK(a == b);
  CHECK(k::serial::sum(a) == doctest::Approx(1.0).epsilon(1e-12));

  const auto x = random_simplex(300, 1);
  const auto y = random_simplex(200, 2);
  std::vector<double> s(x.size() * y.size()), t(s.size());
  k::serial::outer_product(x, y, s);
  k::parallel::outer_product(x, y, t);
  CHECK(s == t);
}

TEST_CASE("bit 0 of the combination index is the first box") {
  const std::vector<double> on = {1.0, 0.0};
  std::vector<double> out(4);
  k::serial::bernoulli_product(on, out);
  // combinations 00, 01, 10, 11: only "10" has the first box on and the second off
  CHECK(out == std::vector<double>{0.0, 0.0, 1.0, 0.0});
}
