#include "folner/groups.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace folner {

std::vector<CanonicalElement> Group::ball(long long) const {
  throw std::logic_error("no ball enumeration for family " + name());
}

Word Group::element_word(const CanonicalElement&) const {
  throw std::logic_error("no normal-form spelling for family " + name());
}

Int Group::element_code(const CanonicalElement& a) const {
  return encode_word(element_word(a));
}

CanonicalElement Group::power(const CanonicalElement& a, long long k) const {
  if (k == 0) return identity();
  CanonicalElement base = k < 0 ? inverse(a) : a;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1
                               : static_cast<unsigned long long>(k);
  CanonicalElement acc = identity();
  CanonicalElement sq = base;
  while (e > 0) {
    if (e & 1ULL) acc = mul(acc, sq);
    e >>= 1ULL;
    if (e > 0) sq = mul(sq, sq);
  }
  return acc;
}

CanonicalElement Group::eval(const Word& w) const {
  CanonicalElement acc = identity();
  for (const Letter& l : w) {
    acc = mul(acc, power(generator(l.gen), l.exp));
  }
  return acc;
}

CanonicalElement Group::eval_code(const Int& code) const {
  return eval(decode_word(code));
}

namespace {

void check_radius(long long radius) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
}

/// Assembles a word from generator runs, dropping zero exponents.
Word run_word(std::vector<Letter> runs) {
  std::vector<Letter> letters;
  for (const Letter& l : runs) {
    if (l.exp != 0) letters.push_back(l);
  }
  return reduce(letters);
}

class ZGroup final : public Group {
 public:
  std::string name() const override { return "Z"; }
  CanonicalElement identity() const override { return 0LL; }
  CanonicalElement generator(long long) const override { return 1LL; }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    return std::get<long long>(a) + std::get<long long>(b);
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    return -std::get<long long>(a);
  }
  std::string render(const CanonicalElement& a) const override {
    return std::to_string(std::get<long long>(a));
  }
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    for (long long k = -radius; k <= radius; ++k) out.emplace_back(k);
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    return run_word({{0, std::get<long long>(a)}});
  }
};

class ZdGroup final : public Group {
 public:
  explicit ZdGroup(int d) : d_(d) {
    if (d <= 0) throw std::invalid_argument("dimension must be positive");
  }
  std::string name() const override { return "Z" + std::to_string(d_); }
  CanonicalElement identity() const override {
    return std::vector<long long>(d_, 0);
  }
  CanonicalElement generator(long long i) const override {
    std::vector<long long> v(d_, 0);
    v[static_cast<size_t>(i % d_)] = 1;
    return v;
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    auto va = std::get<std::vector<long long>>(a);
    const auto& vb = std::get<std::vector<long long>>(b);
    for (int i = 0; i < d_; ++i) va[i] += vb[i];
    return va;
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    auto va = std::get<std::vector<long long>>(a);
    for (auto& x : va) x = -x;
    return va;
  }
  std::string render(const CanonicalElement& a) const override {
    const auto& v = std::get<std::vector<long long>>(a);
    std::ostringstream out;
    out << "(";
    for (int i = 0; i < d_; ++i) out << (i ? "," : "") << v[i];
    out << ")";
    return out.str();
  }
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    std::vector<long long> v(static_cast<size_t>(d_), -radius);
    for (;;) {
      out.emplace_back(v);
      int i = 0;
      while (i < d_ && v[static_cast<size_t>(i)] == radius) {
        v[static_cast<size_t>(i)] = -radius;
        ++i;
      }
      if (i == d_) break;
      ++v[static_cast<size_t>(i)];
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    const auto& v = std::get<std::vector<long long>>(a);
    if (static_cast<int>(v.size()) != d_) {
      throw std::invalid_argument("wrong dimension");
    }
    std::vector<Letter> runs;
    for (int i = 0; i < d_; ++i) runs.push_back({i, v[static_cast<size_t>(i)]});
    return run_word(std::move(runs));
  }

 private:
  int d_;
};

class DirectSumZGroup final : public Group {
 public:
  std::string name() const override { return "DirectSumZ"; }
  CanonicalElement identity() const override {
    return std::map<long long, long long>{};
  }
  CanonicalElement generator(long long i) const override {
    return std::map<long long, long long>{{i, 1}};
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    auto m = std::get<std::map<long long, long long>>(a);
    for (const auto& [k, v] : std::get<std::map<long long, long long>>(b)) {
      auto it = m.find(k);
      if (it == m.end()) {
        m.emplace(k, v);
      } else {
        it->second += v;
        if (it->second == 0) m.erase(it);
      }
    }
    return m;
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    auto m = std::get<std::map<long long, long long>>(a);
    for (auto& [k, v] : m) v = -v;
    return m;
  }
  std::string render(const CanonicalElement& a) const override {
    const auto& m = std::get<std::map<long long, long long>>(a);
    if (m.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, v] : m) {
      out << (first ? "" : "+") << v << "*e" << k;
      first = false;
    }
    return out.str();
  }
  /// Window: the first three coordinates, each entry in {−r..r}.
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    for (long long a = -radius; a <= radius; ++a) {
      for (long long b = -radius; b <= radius; ++b) {
        for (long long c = -radius; c <= radius; ++c) {
          std::map<long long, long long> m;
          if (a != 0) m.emplace(0, a);
          if (b != 0) m.emplace(1, b);
          if (c != 0) m.emplace(2, c);
          out.emplace_back(std::move(m));
        }
      }
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    std::vector<Letter> runs;
    for (const auto& [k, v] : std::get<std::map<long long, long long>>(a)) {
      if (k < 0) throw std::invalid_argument("coordinate outside the image");
      runs.push_back({k, v});
    }
    return run_word(std::move(runs));
  }
};

class LamplighterGroup final : public Group {
 public:
  std::string name() const override { return "Lamplighter"; }
  CanonicalElement identity() const override { return LampElement{}; }
  CanonicalElement generator(long long i) const override {
    if (i == 0) return LampElement{{}, 1};
    return LampElement{{0}, 0};
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    const auto& x = std::get<LampElement>(a);
    const auto& y = std::get<LampElement>(b);
    LampElement out;
    out.shift = x.shift + y.shift;
    out.lamps = x.lamps;
    for (long long p : y.lamps) {
      long long q = p + x.shift;
      auto [it, inserted] = out.lamps.insert(q);
      if (!inserted) out.lamps.erase(it);
    }
    return out;
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    const auto& x = std::get<LampElement>(a);
    LampElement out;
    out.shift = -x.shift;
    for (long long p : x.lamps) out.lamps.insert(p - x.shift);
    return out;
  }
  std::string render(const CanonicalElement& a) const override {
    const auto& x = std::get<LampElement>(a);
    std::ostringstream out;
    out << "(lamps={";
    bool first = true;
    for (long long p : x.lamps) {
      out << (first ? "" : ",") << p;
      first = false;
    }
    out << "},shift=" << x.shift << ")";
    return out.str();
  }
  /// Window: shift in {−r..r}, lamps inside [0, min(r,10)).
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    long long w = std::min(radius, 10LL);
    std::vector<CanonicalElement> out;
    for (long long mask = 0; mask < (1LL << w); ++mask) {
      LampElement e;
      for (long long p = 0; p < w; ++p) {
        if ((mask >> p) & 1LL) e.lamps.insert(p);
      }
      for (long long s = -radius; s <= radius; ++s) {
        e.shift = s;
        out.emplace_back(e);
      }
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    const auto& x = std::get<LampElement>(a);
    std::vector<Letter> runs;
    long long head = 0;
    for (long long p : x.lamps) {
      runs.push_back({0, p - head});
      runs.push_back({1, 1});
      head = p;
    }
    runs.push_back({0, x.shift - head});
    return run_word(std::move(runs));
  }
};

class HeisenbergGroup final : public Group {
 public:
  std::string name() const override { return "Heisenberg"; }
  CanonicalElement identity() const override {
    return std::array<long long, 3>{0, 0, 0};
  }
  CanonicalElement generator(long long i) const override {
    if (i == 0) return std::array<long long, 3>{1, 0, 0};
    if (i == 1) return std::array<long long, 3>{0, 1, 0};
    return std::array<long long, 3>{0, 0, 1};
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    const auto& x = std::get<std::array<long long, 3>>(a);
    const auto& y = std::get<std::array<long long, 3>>(b);
    return std::array<long long, 3>{x[0] + y[0], x[1] + y[1],
                                    x[2] + y[2] + x[0] * y[1]};
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    const auto& x = std::get<std::array<long long, 3>>(a);
    return std::array<long long, 3>{-x[0], -x[1], -x[2] + x[0] * x[1]};
  }
  std::string render(const CanonicalElement& a) const override {
    const auto& x = std::get<std::array<long long, 3>>(a);
    std::ostringstream out;
    out << "(" << x[0] << "," << x[1] << "," << x[2] << ")";
    return out.str();
  }
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    for (long long a = -radius; a <= radius; ++a) {
      for (long long b = -radius; b <= radius; ++b) {
        for (long long c = -radius; c <= radius; ++c) {
          out.emplace_back(std::array<long long, 3>{a, b, c});
        }
      }
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    const auto& x = std::get<std::array<long long, 3>>(a);
    return run_word({{0, x[0]}, {1, x[1]}, {2, x[2] - x[0] * x[1]}});
  }
};

class FiniteGroup final : public Group {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table)
      : table_(std::move(table)) {
    validate();
  }
  std::string name() const override {
    return "Finite" + std::to_string(table_.size());
  }
  CanonicalElement identity() const override {
    return FiniteElement{identity_};
  }
  CanonicalElement generator(long long i) const override {
    int k = static_cast<int>(table_.size());
    return FiniteElement{static_cast<int>((i + 1) % k)};
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    return FiniteElement{table_[static_cast<size_t>(
        std::get<FiniteElement>(a).value)][static_cast<size_t>(
        std::get<FiniteElement>(b).value)]};
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    return FiniteElement{inverse_[static_cast<size_t>(
        std::get<FiniteElement>(a).value)]};
  }
  std::string render(const CanonicalElement& a) const override {
    return std::to_string(std::get<FiniteElement>(a).value);
  }
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    for (size_t v = 0; v < table_.size(); ++v) {
      out.emplace_back(FiniteElement{static_cast<int>(v)});
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    int v = std::get<FiniteElement>(a).value;
    int k = static_cast<int>(table_.size());
    if (v < 0 || v >= k) throw std::invalid_argument("element out of range");
    if (v == identity_) return {};
    long long i = v == 0 ? k - 1 : v - 1;  // generator i maps to (i+1) mod k
    return run_word({{i, 1}});
  }

 private:
  void validate() {
    size_t k = table_.size();
    if (k == 0) throw std::invalid_argument("empty multiplication table");
    for (const auto& row : table_) {
      if (row.size() != k) throw std::invalid_argument("table not square");
      for (int v : row) {
        if (v < 0 || static_cast<size_t>(v) >= k) {
          throw std::invalid_argument("table entry out of range");
        }
      }
    }
    // Latin square: every row and column is a permutation.
    for (size_t i = 0; i < k; ++i) {
      std::vector<bool> row_seen(k, false), col_seen(k, false);
      for (size_t j = 0; j < k; ++j) {
        if (row_seen[static_cast<size_t>(table_[i][j])]) {
          throw std::invalid_argument("row repeats an entry");
        }
        row_seen[static_cast<size_t>(table_[i][j])] = true;
        if (col_seen[static_cast<size_t>(table_[j][i])]) {
          throw std::invalid_argument("column repeats an entry");
        }
        col_seen[static_cast<size_t>(table_[j][i])] = true;
      }
    }
    // Two-sided identity.
    identity_ = -1;
    for (size_t e = 0; e < k; ++e) {
      bool ok = true;
      for (size_t x = 0; x < k && ok; ++x) {
        ok = table_[e][x] == static_cast<int>(x) &&
             table_[x][e] == static_cast<int>(x);
      }
      if (ok) {
        identity_ = static_cast<int>(e);
        break;
      }
    }
    if (identity_ < 0) throw std::invalid_argument("no identity element");
    // Inverses.
    inverse_.assign(k, -1);
    for (size_t x = 0; x < k; ++x) {
      for (size_t y = 0; y < k; ++y) {
        if (table_[x][y] == identity_ && table_[y][x] == identity_) {
          inverse_[x] = static_cast<int>(y);
          break;
        }
      }
      if (inverse_[x] < 0) throw std::invalid_argument("missing inverse");
    }
    // Associativity.
    for (size_t a = 0; a < k; ++a) {
      for (size_t b = 0; b < k; ++b) {
        for (size_t c = 0; c < k; ++c) {
          int left = table_[static_cast<size_t>(table_[a][b])][c];
          int right = table_[a][static_cast<size_t>(table_[b][c])];
          if (left != right) {
            throw std::invalid_argument("table is not associative");
          }
        }
      }
    }
  }

  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

class CircleRationalsGroup final : public Group {
 public:
  std::string name() const override { return "CircleRationals"; }
  CanonicalElement identity() const override { return Rat(0); }
  CanonicalElement generator(long long i) const override {
    return reduce_mod1(Rat(1, i + 1));
  }
  CanonicalElement mul(const CanonicalElement& a,
                       const CanonicalElement& b) const override {
    return reduce_mod1(std::get<Rat>(a) + std::get<Rat>(b));
  }
  CanonicalElement inverse(const CanonicalElement& a) const override {
    return reduce_mod1(-std::get<Rat>(a));
  }
  std::string render(const CanonicalElement& a) const override {
    return rational_to_string(std::get<Rat>(a));
  }
  /// All reduced fractions p/q in [0,1) with denominator q ≤ radius.
  std::vector<CanonicalElement> ball(long long radius) const override {
    check_radius(radius);
    std::vector<CanonicalElement> out;
    for (long long q = 1; q <= radius; ++q) {
      for (long long p = 0; p < q; ++p) {
        if (std::gcd(p, q) == 1) out.emplace_back(Rat(p, q));
      }
    }
    return out;
  }
  Word element_word(const CanonicalElement& a) const override {
    const Rat& x = std::get<Rat>(a);
    if (x < 0 || x >= 1) throw std::invalid_argument("not reduced modulo 1");
    Int p = boost::multiprecision::numerator(x);
    Int q = boost::multiprecision::denominator(x);
    if (p == 0) return {};
    return run_word({{q.convert_to<long long>() - 1,
                      p.convert_to<long long>()}});
  }

 private:
  static Rat reduce_mod1(const Rat& r) {
    Rat out = r - Rat(rat_floor(r));
    return out;  // in [0, 1)
  }
};

}  // namespace

std::shared_ptr<Group> make_z() { return std::make_shared<ZGroup>(); }

std::shared_ptr<Group> make_zd(int d) { return std::make_shared<ZdGroup>(d); }

std::shared_ptr<Group> make_direct_sum_z() {
  return std::make_shared<DirectSumZGroup>();
}

std::shared_ptr<Group> make_lamplighter() {
  return std::make_shared<LamplighterGroup>();
}

std::shared_ptr<Group> make_heisenberg() {
  return std::make_shared<HeisenbergGroup>();
}

std::shared_ptr<Group> make_finite(
    const std::vector<std::vector<int>>& table) {
  return std::make_shared<FiniteGroup>(table);
}

std::shared_ptr<Group> make_cyclic(int k) {
  if (k <= 0) throw std::invalid_argument("order must be positive");
  std::vector<std::vector<int>> table(static_cast<size_t>(k),
                                      std::vector<int>(static_cast<size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      table[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % k;
    }
  }
  return make_finite(table);
}

std::shared_ptr<Group> make_circle_rationals() {
  return std::make_shared<CircleRationalsGroup>();
}

bool equal(const Group& g, const Int& a, const Int& b) {
  return g.eval_code(a) == g.eval_code(b);
}

std::vector<std::pair<Int, Int>> equality_pairs(const Group& g,
                                                std::size_t budget) {
  std::vector<std::pair<Int, Int>> out;
  NuCache nu(g);
  for (Int sum = 0; out.size() < budget; ++sum) {
    for (Int a = 0; a <= sum && out.size() < budget; ++a) {
      Int b = sum - a;
      if (nu(a) == nu(b)) out.emplace_back(a, b);
    }
  }
  return out;
}

const CanonicalElement& NuCache::operator()(const Int& code) {
  auto it = memo_.find(code);
  if (it != memo_.end()) return it->second;
  auto [pos, _] = memo_.emplace(code, group_.eval_code(code));
  return pos->second;
}

Int LeastCodeEnumerator::next() {
  for (;; ++cursor_) {
    CanonicalElement e = group_.eval_code(cursor_);
    if (seen_.insert(e).second) {
      return cursor_++;
    }
  }
}

}  // namespace folner
