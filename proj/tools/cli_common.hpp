#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "folner/common.hpp"
#include "folner/groups.hpp"

namespace folner::cli {

/// Malformed flag value, descriptor, or file; mapped to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;        ///< success / witness
inline constexpr int kExitRefusal = 2;   ///< refusal or refutation, with reason
inline constexpr int kExitBudget = 3;    ///< budget exhausted
inline constexpr int kExitUsage = 64;    ///< usage error

/// Parses an argument that is either inline JSON (starts with '{' or '[')
/// or a path to a JSON file ('-' reads standard input).
nlohmann::json load_json_arg(const std::string& arg);

/// Builds a zoo group from a descriptor like {"family":"Z"}; supported
/// families: Z, Zd (field d), DirectSumZ, Lamplighter, Heisenberg,
/// Cyclic (field k), Finite (field table), CircleRationals.
std::shared_ptr<Group> make_group(const nlohmann::json& desc);

/// Canonical "p/q" rendering (denominator always present).
std::string rat_str(const Rat& r);

/// Parses "p/q" or "p" with an optional leading sign.
Rat parse_rat(const std::string& s);

std::string int_str(const Int& i);

/// Parses a nonnegative decimal code.
Int parse_code(const std::string& s);

/// Parses each token as a word like "g0^2*g1^-1" (commas split tokens) and
/// encodes it.
std::vector<Int> words_to_codes(const std::vector<std::string>& words);

nlohmann::json codes_json(const std::vector<Int>& codes);
std::vector<Int> codes_from_json(const nlohmann::json& arr);

/// Outcome of the from-scratch Folner re-check used by the verify paths.
struct FolnerRecheck {
  bool folner = false;     ///< every defect is at most 1/n
  bool injective = false;  ///< |F| = |values(F)|
  std::size_t set_size = 0;
  std::map<Int, Rat> defects;  ///< keyed by the D codes
};

/// Recomputes the boundary defects of F under every D translation directly
/// from set operations on canonical values. Deliberately independent of the
/// library's search and certification code paths.
FolnerRecheck recheck_folner(const Group& g, const std::vector<Int>& F,
                             const std::vector<Int>& D, long long n);

/// The family metric, recomputed from its definition (arc distance on the
/// rational circle, {0,1} elsewhere) for the independent verify paths.
Rat direct_metric_distance(const Group& g, const CanonicalElement& a,
                           const CanonicalElement& b);

/// Maximum bipartite matching size over an adjacency matrix; a separate
/// implementation kept apart from the library's certificate machinery.
std::size_t direct_matching_size(const std::vector<std::vector<char>>& adj);

/// Parses a rate expression: an integer constant, "k", "k^p", or "b^k".
std::function<long long(long long)> parse_rate(const std::string& expr);

/// Dumps with two-space indentation and a trailing newline; plain objects
/// keep their keys sorted, so equal values serialize byte-identically.
void emit_json(const nlohmann::json& j);

}  // namespace folner::cli
