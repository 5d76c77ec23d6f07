#include "cli_common.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>
#include <set>

#include "folner/codes.hpp"
#include "folner/words.hpp"

namespace folner::cli {

nlohmann::json load_json_arg(const std::string& arg) {
  std::string text;
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) {
    text = arg;
  } else if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin),
                std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot open file: " + arg);
    text.assign(std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>());
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed JSON in " + arg + ": " + e.what());
  }
}

std::shared_ptr<Group> make_group(const nlohmann::json& desc) {
  if (!desc.is_object() || !desc.contains("family")) {
    throw UsageError("group descriptor needs a \"family\" field");
  }
  const std::string family = desc.at("family").get<std::string>();
  try {
    if (family == "Z") return make_z();
    if (family == "Zd") return make_zd(desc.at("d").get<int>());
    if (family == "DirectSumZ") return make_direct_sum_z();
    if (family == "Lamplighter") return make_lamplighter();
    if (family == "Heisenberg") return make_heisenberg();
    if (family == "Cyclic") return make_cyclic(desc.at("k").get<int>());
    if (family == "Finite") {
      return make_finite(
          desc.at("table").get<std::vector<std::vector<int>>>());
    }
    if (family == "CircleRationals") return make_circle_rationals();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad group descriptor: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw UsageError("bad group descriptor: " + std::string(e.what()));
  }
  throw UsageError("unknown group family: " + family);
}

std::string rat_str(const Rat& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

Rat parse_rat(const std::string& s) {
  static const std::regex form(R"(^([+-]?\d+)(?:/(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, form)) {
    throw UsageError("not a rational \"p/q\": " + s);
  }
  const Int num(m[1].str());
  const Int den = m[2].matched ? Int(m[2].str()) : Int(1);
  if (den == 0) throw UsageError("zero denominator: " + s);
  return Rat(num, den);
}

std::string int_str(const Int& i) { return i.str(); }

Int parse_code(const std::string& s) {
  static const std::regex form(R"(^\d+$)");
  if (!std::regex_match(s, form)) {
    throw UsageError("not a nonnegative code: " + s);
  }
  return Int(s);
}

std::vector<Int> words_to_codes(const std::vector<std::string>& words) {
  std::vector<Int> codes;
  for (const std::string& token : words) {
    std::size_t start = 0;
    while (start <= token.size()) {
      const std::size_t comma = token.find(',', start);
      const std::string piece =
          token.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
      if (!piece.empty()) {
        try {
          codes.push_back(encode_word(parse_word(piece)));
        } catch (const std::invalid_argument& e) {
          throw UsageError("bad word \"" + piece + "\": " + e.what());
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (codes.empty()) throw UsageError("empty word list");
  return codes;
}

nlohmann::json codes_json(const std::vector<Int>& codes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Int& c : codes) arr.push_back(int_str(c));
  return arr;
}

std::vector<Int> codes_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw UsageError("expected an array of codes");
  std::vector<Int> codes;
  for (const auto& v : arr) {
    if (!v.is_string()) throw UsageError("codes must be decimal strings");
    codes.push_back(parse_code(v.get<std::string>()));
  }
  return codes;
}

FolnerRecheck recheck_folner(const Group& g, const std::vector<Int>& F,
                             const std::vector<Int>& D, long long n) {
  if (F.empty()) throw UsageError("the set F must be nonempty");
  if (n < 1) throw UsageError("n must be positive");
  FolnerRecheck out;
  std::set<CanonicalElement> values;
  for (const Int& f : F) values.insert(g.eval_code(f));
  out.set_size = values.size();
  out.injective = values.size() == F.size();
  out.folner = true;
  for (const Int& d : D) {
    std::set<CanonicalElement> translated;
    const CanonicalElement vd = g.eval_code(d);
    for (const auto& v : values) translated.insert(g.mul(vd, v));
    long long loss = 0;
    for (const auto& v : values) {
      if (translated.find(v) == translated.end()) ++loss;
    }
    out.defects[d] = Rat(loss, static_cast<long long>(values.size()));
    if (loss * n > static_cast<long long>(values.size())) out.folner = false;
  }
  return out;
}

Rat direct_metric_distance(const Group& g, const CanonicalElement& a,
                           const CanonicalElement& b) {
  if (g.name() == "CircleRationals") {
    const Rat raw =
        boost::multiprecision::abs(std::get<Rat>(a) - std::get<Rat>(b));
    return std::min(raw, Rat(1) - raw);
  }
  return a == b ? Rat(0) : Rat(1);
}

std::size_t direct_matching_size(const std::vector<std::vector<char>>& adj) {
  const std::size_t left = adj.size();
  const std::size_t right = left == 0 ? 0 : adj[0].size();
  std::vector<int> owner(right, -1);
  std::function<bool(std::size_t, std::vector<char>&)> grow =
      [&](std::size_t u, std::vector<char>& seen) {
        for (std::size_t v = 0; v < right; ++v) {
          if (!adj[u][v] || seen[v]) continue;
          seen[v] = 1;
          if (owner[v] < 0 ||
              grow(static_cast<std::size_t>(owner[v]), seen)) {
            owner[v] = static_cast<int>(u);
            return true;
          }
        }
        return false;
      };
  std::size_t matched = 0;
  for (std::size_t u = 0; u < left; ++u) {
    std::vector<char> seen(right, 0);
    if (grow(u, seen)) ++matched;
  }
  return matched;
}

std::function<long long(long long)> parse_rate(const std::string& expr) {
  static const std::regex constant(R"(^\d+$)");
  static const std::regex power(R"(^k\^(\d+)$)");
  static const std::regex exponential(R"(^(\d+)\^k$)");
  std::smatch m;
  if (expr == "k") {
    return [](long long k) { return k; };
  }
  if (std::regex_match(expr, m, constant)) {
    const long long c = std::stoll(m[0].str());
    return [c](long long) { return c; };
  }
  if (std::regex_match(expr, m, power)) {
    const long long p = std::stoll(m[1].str());
    if (p > 12) throw UsageError("rate exponent too large: " + expr);
    return [p](long long k) {
      long long v = 1;
      for (long long i = 0; i < p; ++i) {
        if (k != 0 && v > (1LL << 62) / std::abs(k)) {
          throw UsageError("rate value overflows");
        }
        v *= k;
      }
      return v;
    };
  }
  if (std::regex_match(expr, m, exponential)) {
    const long long base = std::stoll(m[1].str());
    if (base < 2) throw UsageError("exponential base must be at least 2");
    return [base](long long k) {
      long long v = 1;
      for (long long i = 0; i < k; ++i) {
        if (v > (1LL << 62) / base) throw UsageError("rate value overflows");
        v *= base;
      }
      return v;
    };
  }
  throw UsageError("cannot parse rate expression: " + expr);
}

void emit_json(const nlohmann::json& j) {
  std::cout << j.dump(2) << "\n";
}

}  // namespace folner::cli
