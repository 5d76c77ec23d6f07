#include "folner/means.hpp"

#include <algorithm>
#include <string>

namespace folner {

namespace {

void check_bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
}

long long ll_abs(long long v) { return v < 0 ? -v : v; }

Rat two_pow_inv(long long n) { return Rat(Int(1), Int(1) << n); }

}  // namespace

BinarySeqZ BinarySeqZ::explicit_symmetric(std::vector<int> head,
                                          std::vector<int> tail_period) {
  if (head.empty()) throw std::invalid_argument("head must contain x(0)");
  if (tail_period.empty()) {
    throw std::invalid_argument("tail period must be nonempty");
  }
  for (int b : head) check_bit(b);
  for (int b : tail_period) check_bit(b);
  BinarySeqZ x;
  x.head_ = std::move(head);
  x.period_ = std::move(tail_period);
  return x;
}

BinarySeqZ BinarySeqZ::from_runs(std::vector<Run> runs) {
  long long expect = 1;
  long long ones = 0;
  std::vector<long long> before;
  for (const Run& r : runs) {
    check_bit(r.bit);
    if (r.lo != expect || r.hi < r.lo) {
      throw std::invalid_argument("runs must tile 1..radius contiguously");
    }
    before.push_back(ones);
    if (r.bit == 1) ones += r.hi - r.lo + 1;
    expect = r.hi + 1;
  }
  if (runs.empty()) throw std::invalid_argument("segment table is empty");
  BinarySeqZ x;
  x.constructed_ = true;
  x.runs_ = std::move(runs);
  x.ones_before_ = std::move(before);
  return x;
}

int BinarySeqZ::at(long long i) const {
  const long long a = ll_abs(i);
  if (!constructed_) {
    const long long n = static_cast<long long>(head_.size()) - 1;
    if (a <= n) return head_[static_cast<std::size_t>(a)];
    const long long p = static_cast<long long>(period_.size());
    return period_[static_cast<std::size_t>((a - n - 1) % p)];
  }
  if (a == 0) return 1;
  if (a > runs_.back().hi) {
    throw std::invalid_argument("position " + std::to_string(i) +
                                " is beyond the defined radius");
  }
  std::size_t lo = 0;
  std::size_t hi = runs_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (runs_[mid].hi < a) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return runs_[lo].bit;
}

std::optional<long long> BinarySeqZ::defined_radius() const {
  if (!constructed_) return std::nullopt;
  return runs_.back().hi;
}

long long BinarySeqZ::ones_to(long long j) const {
  if (j < 0) throw std::invalid_argument("window index must be nonnegative");
  if (j == 0) return 0;
  if (!constructed_) {
    const long long n = static_cast<long long>(head_.size()) - 1;
    long long ones = 0;
    for (long long i = 1; i <= std::min(j, n); ++i) {
      ones += head_[static_cast<std::size_t>(i)];
    }
    if (j > n) {
      const long long p = static_cast<long long>(period_.size());
      const long long tail = j - n;  // positions n+1 .. j
      long long period_ones = 0;
      for (int b : period_) period_ones += b;
      ones += (tail / p) * period_ones;
      for (long long r = 0; r < tail % p; ++r) {
        ones += period_[static_cast<std::size_t>(r)];
      }
    }
    return ones;
  }
  if (j > runs_.back().hi) {
    throw std::invalid_argument("window reaches beyond the defined radius");
  }
  std::size_t lo = 0;
  std::size_t hi = runs_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (runs_[mid].hi < j) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  long long ones = ones_before_[lo];
  if (runs_[lo].bit == 1) ones += j - runs_[lo].lo + 1;
  return ones;
}

Rat BinarySeqZ::mean_at(long long j) const {
  return Rat(at(0) + 2 * ones_to(j), 2 * j + 1);
}

Rat BinarySeqZ::limit_mean() const {
  if (constructed_) return Rat(0);
  long long period_ones = 0;
  for (int b : period_) period_ones += b;
  return Rat(period_ones, static_cast<long long>(period_.size()));
}

std::vector<int> BinarySeqZ::materialize(long long j) const {
  std::vector<int> bits;
  bits.reserve(static_cast<std::size_t>(j) + 1);
  for (long long i = 0; i <= j; ++i) bits.push_back(at(i));
  return bits;
}

const std::vector<int>& BinarySeqZ::head() const {
  if (constructed_) {
    throw std::invalid_argument("segment tables have no explicit head");
  }
  return head_;
}

const std::vector<int>& BinarySeqZ::period() const {
  if (constructed_) {
    throw std::invalid_argument("segment tables have no periodic tail");
  }
  return period_;
}

X0Construction build_x0(const std::function<long long(long long)>& f,
                        long long k_max) {
  if (k_max < 2) throw std::invalid_argument("k_max must be at least 2");
  X0Construction out;
  std::vector<BinarySeqZ::Run> runs = {{1, 3, 0}, {4, 5, 1}};
  long long i_prev = 5;
  long long sum = 5;  // x(0) + twice the ones at 4, 5
  for (long long k = 3; k <= k_max; ++k) {
    // entering bracket, plus the strict lower bound it implies
    if (!(Rat(sum, 2 * i_prev + 1) < Rat(1, k - 1) &&
          Rat(1, k - 1) <= Rat(sum, 2 * i_prev - 1) &&
          Rat(1, k) < Rat(sum, 2 * i_prev + 1))) {
      throw std::logic_error("stage bracket violated entering stage " +
                             std::to_string(k));
    }
    const long long fk = f(k);
    if (fk < 0) throw std::invalid_argument("rate function must be nonnegative");
    const long long target = 2 * fk + sum;
    if (target > (1LL << 55) / (k + 1)) {
      throw std::invalid_argument("rate function too large for exact indices");
    }
    // least i' >= i_prev with target/(2 f + 2 i' + 1) < 1/(k-1)
    const long long raw = (k - 1) * target - 2 * fk - 1;
    long long i_prime = std::max(i_prev, raw < 0 ? 0 : raw / 2 + 1);
    if (!(Rat(1, k) <= Rat(target, 2 * fk + 2 * i_prime + 1) &&
          Rat(target, 2 * fk + 2 * i_prime + 1) < Rat(1, k - 1))) {
      throw std::logic_error("refined index bracket unsatisfiable at stage " +
                             std::to_string(k));
    }
    if (i_prime > i_prev &&
        Rat(target, 2 * fk + 2 * (i_prime - 1) + 1) < Rat(1, k - 1)) {
      throw std::logic_error("refined index not minimal at stage " +
                             std::to_string(k));
    }
    // least t > i' with target/(2 f + 2 t + 1) < 1/k
    const long long raw_t = k * target - 2 * fk - 1;
    long long t_k = std::max(i_prime + 1, raw_t < 0 ? 0 : raw_t / 2 + 1);
    if (!(Rat(target, 2 * fk + 2 * t_k + 1) < Rat(1, k))) {
      throw std::logic_error("stopping index bound failed at stage " +
                             std::to_string(k));
    }
    if (!(Rat(target, 2 * fk + 2 * (t_k - 1) + 1) >= Rat(1, k))) {
      throw std::logic_error("stopping index not minimal at stage " +
                             std::to_string(k));
    }
    const long long i_k = fk + t_k;
    if (i_prime >= i_prev + 1) runs.push_back({i_prev + 1, i_prime, 0});
    if (fk >= 1) runs.push_back({i_prime + 1, i_prime + fk, 1});
    runs.push_back({i_prime + fk + 1, i_k, 0});
    // the bracket that stage k+1 will assume, with the new one count
    if (!(Rat(target, 2 * i_k + 1) < Rat(1, k) &&
          Rat(1, k) <= Rat(target, 2 * i_k - 1))) {
      throw std::logic_error("stage bracket broken after stage " +
                             std::to_string(k));
    }
    out.stages.push_back({k, fk, i_prev, i_prime, t_k, i_k, target});
    sum = target;
    i_prev = i_k;
  }
  out.x = BinarySeqZ::from_runs(std::move(runs));
  return out;
}

ModulusTable modulus_table(const BinarySeqZ& x,
                           const std::function<long long(long long)>& f,
                           long long k_max, long long horizon) {
  if (k_max < 1) throw std::invalid_argument("k_max must be positive");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (auto radius = x.defined_radius(); radius && horizon > *radius) {
    throw std::invalid_argument("horizon exceeds the defined radius");
  }
  ModulusTable table;
  table.mean = x.limit_mean();
  table.horizon = horizon;
  std::vector<Rat> dev;
  dev.reserve(static_cast<std::size_t>(horizon) + 1);
  long long ones = 0;
  const int x0 = x.at(0);
  for (long long j = 0; j <= horizon; ++j) {
    if (j > 0) ones += x.at(j);
    const Rat m(x0 + 2 * ones, 2 * j + 1);
    dev.push_back(boost::multiprecision::abs(m - table.mean));
  }
  for (long long k = 1; k <= k_max; ++k) {
    ModulusRow row;
    row.k = k;
    const Rat bound(1, k);
    long long last = -1;
    for (long long j = 0; j <= horizon; ++j) {
      if (dev[static_cast<std::size_t>(j)] >= bound) last = j;
    }
    if (last < horizon) row.j_min = std::max<long long>(last, 0);
    const long long fk = f(k);
    if (fk < 0) throw std::invalid_argument("rate function must be nonnegative");
    for (long long j = fk + 1; j <= horizon; ++j) {
      if (dev[static_cast<std::size_t>(j)] >= bound) {
        row.f_violation = j;
        break;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

long long pairwise_modulus_index(const BinarySeqZ& x, long long k,
                                 long long horizon) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  std::vector<Rat> means;
  means.reserve(static_cast<std::size_t>(horizon) + 1);
  long long ones = 0;
  const int x0 = x.at(0);
  for (long long j = 0; j <= horizon; ++j) {
    if (j > 0) ones += x.at(j);
    means.emplace_back(x0 + 2 * ones, 2 * j + 1);
  }
  // spread of the tail (j, horizon] is nonincreasing in j
  const Rat bound(1, k);
  Rat hi = means.back();
  Rat lo = means.back();
  long long best = horizon;  // empty tail always qualifies
  for (long long j = horizon - 1; j >= 0; --j) {
    hi = std::max(hi, means[static_cast<std::size_t>(j + 1)]);
    lo = std::min(lo, means[static_cast<std::size_t>(j + 1)]);
    if (hi - lo < bound) {
      best = j;
    } else {
      break;
    }
  }
  return best;
}

Int dominator(const std::vector<std::function<long long(long long)>>& gs,
              long long n) {
  if (n < 0) throw std::invalid_argument("argument must be nonnegative");
  Int total = 0;
  const long long rows =
      std::min<long long>(n, static_cast<long long>(gs.size()));
  for (long long i = 1; i <= rows; ++i) {
    for (long long j = 1; j <= n; ++j) {
      const long long v = gs[static_cast<std::size_t>(i - 1)](j);
      if (v < 0) {
        throw std::invalid_argument("enumerated functions must be nonnegative");
      }
      total += v;
    }
  }
  return total;
}

Rat real_embed(const BinarySeqZ& x, long long digits) {
  if (digits < 0) throw std::invalid_argument("digit count must be nonnegative");
  Rat r = 0;
  for (long long i = 1; i <= digits; ++i) {
    const long long pos = i % 2 == 0 ? i / 2 : (i - 1) / 2;
    if (x.at(pos) == 1) r += two_pow_inv(i);
  }
  return r;
}

Rat limit_real(const BinarySeqZ& x) {
  if (x.constructed()) {
    throw std::invalid_argument("the embedded limit needs a total sequence");
  }
  // Position 0 contributes digit 1 (weight 1/2); every position m >= 1
  // contributes digits 2m and 2m+1, total weight 3 · 2^-(2m+1).
  const auto& head = x.head();
  const auto& period = x.period();
  const long long n = static_cast<long long>(head.size()) - 1;
  Rat r = head[0] == 1 ? Rat(1, 2) : Rat(0);
  for (long long m = 1; m <= n; ++m) {
    if (head[static_cast<std::size_t>(m)] == 1) {
      r += Rat(Int(3), Int(1) << (2 * m + 1));
    }
  }
  const long long p = static_cast<long long>(period.size());
  Rat tail = 0;
  for (long long s = 0; s < p; ++s) {
    if (period[static_cast<std::size_t>(s)] == 1) {
      tail += Rat(Int(3), Int(1) << (2 * (n + 1 + s) + 1));
    }
  }
  const Int four_p = Int(1) << (2 * p);
  return r + tail * Rat(four_p, four_p - 1);
}

DiscontinuityWitness discontinuity_witness(const BinarySeqZ& x, const Rat& q,
                                           const Rat& q_prime,
                                           const Rat& eps) {
  if (x.constructed()) {
    throw std::invalid_argument("a total sequence is required");
  }
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const Rat mean = x.limit_mean();
  if (mean == Rat(1, 2)) {
    throw DiscontinuityRefusal(
        "limit mean is exactly one half; no constant tail moves it by more "
        "than one half");
  }
  const Rat r = limit_real(x);
  if (!(q < r && r < q_prime)) {
    throw std::invalid_argument(
        "the embedded real must lie strictly inside the interval");
  }
  const int tail_bit = mean > Rat(1, 2) ? 0 : 1;
  // Least odd digit count whose full-tail slack 2^-n fits eps and both
  // interval margins; every bound below is strict, so the truncation error
  // (at most the slack) keeps the witness strictly admissible.
  long long n = 1;
  while (true) {
    const Rat slack = two_pow_inv(n);
    if (slack < eps && q < r - slack && r + slack < q_prime) break;
    n += 2;
    if (n > (1LL << 20)) {
      throw std::logic_error("digit search failed to close the margins");
    }
  }
  DiscontinuityWitness w;
  w.digits = n;
  w.x_prime = BinarySeqZ::explicit_symmetric(x.materialize((n - 1) / 2),
                                             {tail_bit});
  w.r = r;
  w.r_prime = limit_real(w.x_prime);
  w.mean = mean;
  w.mean_prime = Rat(tail_bit);
  using boost::multiprecision::abs;
  if (!(abs(w.r - w.r_prime) < eps && q < w.r_prime && w.r_prime < q_prime &&
        abs(w.mean - w.mean_prime) > Rat(1, 2))) {
    throw std::logic_error("witness post-conditions failed");
  }
  return w;
}

}  // namespace folner
