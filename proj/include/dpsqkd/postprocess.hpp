#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpsqkd/params.hpp"
#include "dpsqkd/sim.hpp"

// Key post-processing: error-rate estimation by public sampling,
// error-correction accounting, and Toeplitz-hash privacy amplification
// down to the secure length.

namespace dpsqkd {

/// Discloses a random sample of the sifted key, returns the estimated
/// error rate and the undisclosed remainder. sample_fraction in (0, 1];
/// fraction 1 compares everything and leaves an empty remainder.
std::pair<double, SiftedKeyPair> estimate_qber(const SiftedKeyPair& pair,
                                               double sample_fraction, std::uint64_t seed);

struct ReconciliationResult {
  std::vector<std::uint8_t> corrected_bits;  // equal to Alice's bits afterwards
  std::uint64_t leaked_bits = 0;             // ceil(f * h(qber) * n)
  double disclosed_fraction = 0.0;
};

/// Idealized error correction: Bob's bits are set to Alice's; the price is
/// the standard leakage f * h(qber) per bit, tracked for privacy
/// amplification.
ReconciliationResult reconcile(const SiftedKeyPair& pair, double qber_estimate,
                               double ec_inefficiency);

/// Toeplitz-hash compression of key_bits (values 0/1) to out_len bits.
/// The matrix diagonal bits derive deterministically from hash_seed; the
/// map is GF(2)-linear in the key for a fixed seed.
std::vector<std::uint8_t> toeplitz_hash(const std::vector<std::uint8_t>& key_bits,
                                        std::size_t out_len, std::uint64_t hash_seed);

enum class DistillStatus { kOk, kQberAboveThreshold };
const char* to_string(DistillStatus status);

struct DistillOptions {
  double sample_fraction = 1.0;  // 1 = full comparison (infinite-key idealization)
  std::uint64_t seed = 1;        // sampling seed for fraction < 1
  std::uint64_t hash_seed = 1;
};

struct SecureKeyReport {
  std::uint64_t sifted_length = 0;
  std::uint64_t working_length = 0;  // bits kept after estimation disclosure
  std::optional<double> qber_estimate;
  double secure_fraction = 0.0;  // unclamped; -inf when the bracket leaves its domain
  std::uint64_t secure_length = 0;
  std::uint64_t leaked_bits = 0;
  std::vector<std::uint8_t> final_key;  // bit values 0/1
  std::uint64_t hash_seed = 0;
  DistillStatus status = DistillStatus::kOk;
  SystemParams params;  // snapshot
  std::string generator;
};

/// Full chain: estimate, reconcile, compress. secure_length =
/// floor(working_length * secure_fraction), 0 when the fraction is not
/// positive (status records why).
SecureKeyReport distill(const SiftedKeyPair& pair, const SystemParams& params,
                        const DistillOptions& options = {});

/// MSB-first bit packing (bit 0 of the key becomes the most significant
/// bit of byte 0); the tail byte is zero-padded.
std::vector<std::uint8_t> pack_bits_msb(const std::vector<std::uint8_t>& bits);
std::string bits_to_hex(const std::vector<std::uint8_t>& bits);

}  // namespace dpsqkd
