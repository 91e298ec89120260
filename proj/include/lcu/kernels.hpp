#pragma once

#include <cstdint>
#include <functional>

#include "lcu/circuit.hpp"
#include "lcu/costing.hpp"
#include "lcu/integrals.hpp"

namespace lcu::kernels {

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

/// t <- t + i (mod 2^n), or with a carry output qubit. Carries are erased by
/// X-basis measurement with classically conditioned fixups. Toffoli count
/// n - 1 (modular) or n (carry).
Circuit build_adder(int n, bool carry);

/// t <- t - i (mod 2^n); Toffoli count n - 1.
Circuit build_subtractor(int n);

/// flag <- [t < i] with both registers restored; Toffoli count n.
Circuit build_inequality(int n);

/// flag <- [t < constant], t restored; count n - 1 - trailing_zeros(constant)
/// (0 when the constant is 0).
Circuit build_inequality_const(int n, uint64_t constant);

// ---------------------------------------------------------------------------
// Lookups
// ---------------------------------------------------------------------------

/// One-hot marker per address value; d - 1 Toffolis.
Circuit build_unary_iteration(long long d);

/// Nested two-register iteration over d1 x d2 values; d1*d2 - 1 Toffolis.
Circuit build_unary_iteration_nested(long long d1, long long d2);

/// XOR table lookup: out ^= table[addr]; d - 1 Toffolis.
Circuit build_qrom(long long d, int M, const std::vector<uint64_t>& table);

/// Select-swap lookup borrowing (k-1)M dirty qubits, restored exactly;
/// 2 ceil(d/k) + 4M(k-1) Toffolis.
Circuit build_qroam_dirty(long long d, int M, long long k, const std::vector<uint64_t>& table);

/// Select-swap lookup on clean ancillae; ceil(d/k) + M(k-1) Toffolis. r_0
/// holds the output, the remaining blocks hold the other table words of the
/// same row until the unlookup measures them away.
Circuit build_qroam_clean(long long d, int M, long long k, const std::vector<uint64_t>& table);

/// Measurement-based uncomputation of an M-bit lookup output; clean mode
/// ceil(d/k) + k Toffolis, dirty mode 2 ceil(d/k) + 4k. Standalone circuit
/// whose out register is expected to hold table[addr] on entry.
Circuit build_unlookup(long long d, int M, long long k, bool dirty,
                       const std::vector<uint64_t>& table);

/// Binary to one-hot unary conversion (X plus a cswap tree; k - 1 Toffolis)
/// and its measurement-based erasure (no Toffolis at all).
Circuit build_binary_to_unary(int bits);
Circuit build_unary_erasure(int bits);

/// Block positions after the rotate-to-front network for selector l:
/// entry p is the original block index now sitting at position p. Used when
/// composing an unlookup over a grouped lookup's whole block row.
std::vector<int> block_permutation(int k, int l, bool inverse);

// ---------------------------------------------------------------------------
// Alias-sampling state preparation
// ---------------------------------------------------------------------------

struct AliasTable {
  int mu = 0;
  int slot_bits = 0;
  std::vector<uint64_t> ind;
  std::vector<uint64_t> alt;
  std::vector<uint64_t> keep;  // in [0, 2^mu]; full slots self-alias

  /// Exact discretized probability (numerator over slots * 2^mu) of
  /// producing a given index value.
  long long discretized_numerator(uint64_t value) const;
};

/// Two-stack alias construction over mu-bit keep values. Weights are padded
/// with zeros to a power of two; rounding is to nearest with ties up,
/// followed by a largest-remainder repair so slot masses are exact.
AliasTable build_alias_table(const std::vector<std::pair<uint64_t, double>>& indexed_weights,
                             int mu);

/// Dense preparation over 2^b contiguous values (index kept in the slot
/// register). Output amplitudes match the mu-bit discretized target exactly.
Circuit build_alias_prepare(const std::vector<double>& weights, int mu);

/// Sparse preparation outputting ind / alt / keep from the lookup.
Circuit build_sparse_prepare(const std::vector<std::pair<uint64_t, double>>& indexed_weights,
                             int mu);

// ---------------------------------------------------------------------------
// Selected operators and the walk
// ---------------------------------------------------------------------------

/// One controlled selected ranged-operator pair over N spin-orbitals
/// (N <= 8): applies (-1)^theta times X Z..Z X, Y Z..Z Y, identity or -Z on
/// the system, keyed by p, q and the q1 qubit. 2N +able ceil(log2 N)
/// Toffolis, matching half of select_cost(N).
Circuit build_select_ranged(int N);

struct WalkInfo {
  double lambda = 0.0;          // true one-norm of the encoded weights
  std::vector<double> slot_probabilities;  // discretized, over the slot space
  Circuit circuit;
  Circuit prepare;  // the preparation alone, on the same qubit layout
};

/// Full qubitization step (prepare, select, inverse prepare, reflection) for
/// a two-spatial-orbital Hamiltonian, with mu-bit discretized preparation
/// amplitudes. Eigenphases approximate +/- arccos(E_k / lambda).
WalkInfo build_qubitization_walk(const IntegralSet& iset, int mu);

/// Circuit realization of the contiguous-index computation; Toffoli count
/// equals contiguous_index_cost(N, L, schedule) step for step.
Circuit build_contiguous_index(int N, int L, const ContiguousSchedule& sched);
Circuit build_contiguous_index(int N, int L);

}  // namespace lcu::kernels
