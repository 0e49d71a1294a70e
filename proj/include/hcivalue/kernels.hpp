#pragma once

// Reduction and enumeration kernels behind the information measures.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing, `parallel::` is the OpenMP version. The parallel reductions split
// the input into fixed-size blocks, reduce each block independently and then
// add the block partials in order, so their result does not depend on the
// number of threads. The unqualified entry points pick the parallel version
// once the input is large enough to pay for the thread team.

#include <cstddef>
#include <span>

namespace hcivalue::kernels {

inline constexpr std::size_t kBlockSize = 4096;
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

namespace serial {

double sum(std::span<const double> x);

/// -sum p log2 p with 0 log 0 = 0.
double entropy_terms(std::span<const double> p);

/// sum q log2(q / p). Cells with q = 0 contribute 0; the caller guarantees p > 0 wherever q > 0.
double kl_terms(std::span<const double> q, std::span<const double> p);

/// sum_ij J_ij log2(J_ij / (r_i c_j)) over a row-major joint.
double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal);

/// out[c] = prod_j (bit j of c set ? on[j] : 1 - on[j]), bit 0 being the most significant.
/// out.size() must be 2^on.size().
void bernoulli_product(std::span<const double> on, std::span<double> out);

/// out[i * b.size() + j] = a[i] * b[j].
void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);

}  // namespace serial

namespace parallel {

double sum(std::span<const double> x);
double entropy_terms(std::span<const double> p);
double kl_terms(std::span<const double> q, std::span<const double> p);
double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal);
void bernoulli_product(std::span<const double> on, std::span<double> out);
void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);

}  // namespace parallel

double sum(std::span<const double> x);
double entropy_terms(std::span<const double> p);
double kl_terms(std::span<const double> q, std::span<const double> p);
double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal);
void bernoulli_product(std::span<const double> on, std::span<double> out);
void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace hcivalue::kernels
