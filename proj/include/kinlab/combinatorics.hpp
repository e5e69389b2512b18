#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinlab::comb {

using Signs = std::vector<int>;

// Orders abstracts by length first, then lexicographically with -1 < +1.
struct SignsLess {
    bool operator()(const Signs& a, const Signs& b) const;
};

using AbstractSet = std::set<Signs, SignsLess>;

struct Abstract {
    Signs signs;
    int degree = 0;
    int m0 = 1;
    int length() const { return static_cast<int>(signs.size()); }
};

// Degree implied by the sign sequence (m = -sum).
int degree_of(const Signs& s);

bool validate_abstract(const Signs& signs, int m, int m0);
std::vector<Abstract> enumerate_abstracts(int m, int m0, int max_len);

// Smallest admissible set containing the seed.
AbstractSet admissible_closure_of(const AbstractSet& seed, int m0);
// Smallest admissible set containing every abstract of length <= K.
AbstractSet admissible_closure(int m0, int K);
bool is_admissible(const AbstractSet& omega, int m0);
AbstractSet boundary(const AbstractSet& omega, int m0);

struct Collision {
    int s = 0, a = 0, b = 0;
    bool operator==(const Collision&) const = default;
};

struct History {
    Abstract abstract;
    std::vector<Collision> collisions;
    std::vector<std::vector<int>> alive;  // omega_0 .. omega_n, sorted
};

bool validate_history(const History& h);
std::vector<History> enumerate_histories(const Abstract& a);
// Visits histories in the same order as enumerate_histories without storing them.
void for_each_history(const Abstract& a, const std::function<void(const History&)>& visit);
std::uint64_t count_histories(const Abstract& a);

// Random history of a valid abstract: each collision is drawn uniformly among
// the admissible (a, b) at that step, restarting on dead ends. Not uniform over
// histories. Throws std::invalid_argument after max_attempts dead ends (e.g.
// (1,-1) at degree 0, which has no history).
History sample_history(const Abstract& a, std::mt19937_64& rng, int max_attempts = 1000);

// q_j^i = sum_l coeff(i, j, l) k_{l+1}; momenta 1..m are the inputs, the
// rest are created in collision order.
struct WaveVectorTable {
    int n = 0;      // collisions
    int slots = 0;  // particle slots 0..S
    int S = 0;      // momentum variables
    std::vector<std::int8_t> c;
    int at(int i, int j, int l) const { return c[(static_cast<std::size_t>(i) * slots + j) * S + l]; }
    std::int8_t& at(int i, int j, int l) { return c[(static_cast<std::size_t>(i) * slots + j) * S + l]; }
    bool momentum_conserved() const;
    bool column_property() const;
};

WaveVectorTable wave_vector_table(const History& h);

// varpi_i for 1 <= i < n, returned at index i-1.
std::vector<int> varpi_sequence(const History& h, const WaveVectorTable& q);
std::vector<int> varpi_sequence(const History& h);

struct Tent {
    int alpha = 0, beta = 0;  // 1-based, inclusive
    int type = 0;             // 0: sign sum 0, 1: sign sum -1
};

struct TentDecomposition {
    std::vector<Tent> tents;
    std::vector<int> down_steps;  // 1-based positions outside tents
};

// Throws std::invalid_argument when no decomposition exists, e.g. (1,-1).
TentDecomposition tent_decomposition(const Signs& s);

struct AuditRecord {
    Signs signs;
    int degree = 0;
    std::uint64_t histories = 0;
    int max_bad = -1;  // -1 when there are no histories
    std::uint64_t bound_violations = 0;
    std::uint64_t tent_violations = 0;
    bool has_tents = true;
};

struct AuditReport {
    int m0 = 0, n_max = 0;
    std::vector<AuditRecord> records;
    std::uint64_t total_histories = 0;
    std::uint64_t bound_violations = 0;
    std::uint64_t tent_violations = 0;
    bool ok() const { return bound_violations == 0 && tent_violations == 0; }
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact audit over all abstracts with s_1 = 1, degree <= m0 and length <= n_max.
// Counts histories by dynamic programming over isomorphism classes of the
// momentum graph (see audit.cpp); state_cap bounds the class table.
AuditReport bad_index_audit(int m0, int n_max, std::uint64_t state_cap = 10'000'000);

// Same audit by literal history enumeration; throws ResourceLimit past the cap.
AuditReport bad_index_audit_enumerate(int m0, int n_max, std::uint64_t history_cap = 10'000'000);

struct RemainderEntry {
    int m = 0;
    Signs signs;          // empty for the renormalization correction in R_0
    std::string kind;     // "boundary", "omega1-tail" or "renormalization"
    int n = 0;
    // Prefactor t_N * N^{-half_power/2} * i^{i_power}.
    int half_power = 0;
    int i_power = 0;
    std::uint64_t diagrams = 0;
};

std::vector<RemainderEntry> remainder_catalog(const AbstractSet& omega, int m0);

std::string to_string(const Signs& s);

}  // namespace kinlab::comb
