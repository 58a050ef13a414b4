#include "dpsqkd/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dpsqkd/model.hpp"
#include "dpsqkd/rng.hpp"

namespace dpsqkd {

namespace {

double full_comparison_qber(const SiftedKeyPair& pair) {
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < pair.size(); ++i)
    errors += (pair.alice_bits[i] != pair.bob_bits[i]);
  return static_cast<double>(errors) / static_cast<double>(pair.size());
}

}  // namespace

std::pair<double, SiftedKeyPair> estimate_qber(const SiftedKeyPair& pair,
                                               double sample_fraction, std::uint64_t seed) {
  const std::size_t n = pair.size();
  if (n == 0) throw std::invalid_argument("cannot estimate the error rate of an empty key");
  if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
    throw std::invalid_argument("sample_fraction must lie in (0, 1]");
  std::size_t m = static_cast<std::size_t>(
      std::llround(sample_fraction * static_cast<double>(n)));
  m = std::clamp<std::size_t>(m, 1, n);

  // partial Fisher-Yates: the first m entries become the disclosed sample
  std::vector<std::uint64_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  const std::uint64_t key = rng::stream_key(seed, rng::Stream::kSample);
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint64_t r = rng::at(key, k) % static_cast<std::uint64_t>(n - k);
    std::swap(index[k], index[k + r]);
  }

  std::vector<bool> disclosed(n, false);
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = static_cast<std::size_t>(index[k]);
    disclosed[i] = true;
    errors += (pair.alice_bits[i] != pair.bob_bits[i]);
  }
  const double estimate = static_cast<double>(errors) / static_cast<double>(m);

  SiftedKeyPair rest;
  rest.alice_bits.reserve(n - m);
  rest.bob_bits.reserve(n - m);
  rest.slot_indices.reserve(n - m);
  std::uint64_t rest_errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (disclosed[i]) continue;
    rest.alice_bits.push_back(pair.alice_bits[i]);
    rest.bob_bits.push_back(pair.bob_bits[i]);
    if (i < pair.slot_indices.size()) rest.slot_indices.push_back(pair.slot_indices[i]);
    rest_errors += (pair.alice_bits[i] != pair.bob_bits[i]);
  }
  if (!rest.alice_bits.empty())
    rest.measured_qber =
        static_cast<double>(rest_errors) / static_cast<double>(rest.alice_bits.size());
  return {estimate, std::move(rest)};
}

ReconciliationResult reconcile(const SiftedKeyPair& pair, double qber_estimate,
                               double ec_inefficiency) {
  if (!(qber_estimate >= 0.0) || qber_estimate >= 0.5)
    throw std::invalid_argument("qber estimate must lie in [0, 0.5)");
  if (!(ec_inefficiency >= 1.0))
    throw std::invalid_argument("error-correction inefficiency must be at least 1");
  ReconciliationResult res;
  res.corrected_bits = pair.alice_bits;
  const std::size_t n = pair.size();
  if (n > 0 && qber_estimate > 0.0) {
    const double bits = ec_inefficiency * binary_entropy(qber_estimate) *
                        static_cast<double>(n);
    res.leaked_bits = static_cast<std::uint64_t>(std::ceil(bits - 1e-9));
  }
  res.disclosed_fraction =
      n > 0 ? static_cast<double>(res.leaked_bits) / static_cast<double>(n) : 0.0;
  return res;
}

std::vector<std::uint8_t> toeplitz_hash(const std::vector<std::uint8_t>& key_bits,
                                        std::size_t out_len, std::uint64_t hash_seed) {
  const std::size_t n = key_bits.size();
  if (out_len > n)
    throw std::length_error("hash output cannot be longer than the input key");
  if (out_len == 0) return {};

  // T[i][j] = e[(out_len-1-i) + j], e = diagonal bit stream of hash_seed.
  // Row i is then a window of e starting at offset (out_len-1-i), which
  // word-level shifts extract 64 key bits at a time.
  const std::uint64_t key = rng::stream_key(hash_seed, rng::Stream::kToeplitz);
  const std::size_t diag_bits = out_len + n - 1;
  const std::size_t diag_words = diag_bits / 64 + 2;  // +1 guard word for the shifts
  std::vector<std::uint64_t> diag(diag_words);
  for (std::size_t w = 0; w < diag_words; ++w) diag[w] = rng::at(key, w);

  const std::size_t key_words = (n + 63) / 64;
  std::vector<std::uint64_t> packed(key_words, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (key_bits[j] & 1) packed[j / 64] |= 1ull << (j % 64);

  std::vector<std::uint8_t> out(out_len);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(out_len); ++i) {
    const std::size_t offset = out_len - 1 - static_cast<std::size_t>(i);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < key_words; ++w) {
      const std::size_t bitpos = offset + 64 * w;
      const std::size_t q = bitpos / 64, r = bitpos % 64;
      std::uint64_t window = diag[q] >> r;
      if (r) window |= diag[q + 1] << (64 - r);
      acc ^= window & packed[w];
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

const char* to_string(DistillStatus status) {
  switch (status) {
    case DistillStatus::kOk: return "ok";
    case DistillStatus::kQberAboveThreshold: return "qber_above_threshold";
  }
  return "unknown";
}

SecureKeyReport distill(const SiftedKeyPair& pair, const SystemParams& params,
                        const DistillOptions& options) {
  params.validate();
  if (pair.size() == 0) throw std::invalid_argument("cannot distill an empty key");
  if (!(options.sample_fraction > 0.0) || options.sample_fraction > 1.0)
    throw std::invalid_argument("distill.sample_fraction must lie in (0, 1]");

  SecureKeyReport report;
  report.sifted_length = pair.size();
  report.hash_seed = options.hash_seed;
  report.params = params;
  report.generator = rng::kGeneratorName;

  double qber_est;
  SiftedKeyPair working;
  if (options.sample_fraction >= 1.0) {
    // Full comparison: the infinite-key idealization, where estimation
    // consumes a negligible fraction and the whole key remains usable.
    qber_est = full_comparison_qber(pair);
    working = pair;
  } else {
    auto [estimate, rest] = estimate_qber(pair, options.sample_fraction, options.seed);
    qber_est = estimate;
    working = std::move(rest);
  }
  report.qber_estimate = qber_est;
  report.working_length = working.size();

  if (qber_est >= 0.5) {
    report.secure_fraction = -std::numeric_limits<double>::infinity();
    report.status = DistillStatus::kQberAboveThreshold;
    return report;
  }
  report.secure_fraction = secure_fraction_lenient(qber_est, params);
  if (!(report.secure_fraction > 0.0) || working.size() == 0) {
    report.status = DistillStatus::kQberAboveThreshold;
    return report;
  }

  const ReconciliationResult rec = reconcile(working, qber_est, params.ec_inefficiency);
  report.leaked_bits = rec.leaked_bits;
  const double target =
      static_cast<double>(working.size()) * report.secure_fraction;
  report.secure_length = static_cast<std::uint64_t>(std::floor(target + 1e-9));
  if (report.secure_length == 0) {
    report.status = DistillStatus::kQberAboveThreshold;
    return report;
  }
  report.final_key = toeplitz_hash(rec.corrected_bits,
                                   static_cast<std::size_t>(report.secure_length),
                                   options.hash_seed);
  report.status = DistillStatus::kOk;
  return report;
}

std::vector<std::uint8_t> pack_bits_msb(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return bytes;
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
  static const char* digits = "0123456789abcdef";
  const auto bytes = pack_bits_msb(bits);
  std::string hex;
  hex.reserve(2 * bytes.size());
  for (std::uint8_t b : bytes) {
    hex.push_back(digits[b >> 4]);
    hex.push_back(digits[b & 0xF]);
  }
  return hex;
}

}  // namespace dpsqkd
