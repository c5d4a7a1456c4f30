#include "bplab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bplab {

namespace {

std::int64_t den64(const Rational& r) {
  return to_int64(Rational(r.get_den()));
}

// Common denominator that makes every heavy-cycle weight of a cycle with
// half-length n an integer: 2 (n - 1) * den(eps) * den(w_max).
std::int64_t cycle_scale(int n, const Rational& w_max, const Rational& eps) {
  std::int64_t s = 2 * static_cast<std::int64_t>(n - 1);
  std::int64_t out;
  if (__builtin_mul_overflow(s, den64(eps), &out) || __builtin_mul_overflow(out, den64(w_max), &out))
    throw MagnitudeOverflow("instance scale exceeds 64 bits");
  return out;
}

struct Builder {
  int n;
  std::int64_t scale;
  std::vector<std::int64_t> weights;
  std::vector<EdgeClass> classes;

  Builder(int size, std::int64_t s, std::int64_t fill, EdgeClass fill_class)
      : n(size), scale(s), weights(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), fill),
        classes(weights.size(), fill_class) {}

  void set(int i, int j, const Rational& w, EdgeClass c) {
    const auto cell = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
    weights[cell] = to_int64(w * scale);
    classes[cell] = c;
  }

  // Heavy cycle on alpha/beta offset..offset+len-1.
  void place_cycle(int offset, const CycleParams& p) {
    for (int k = 0; k < p.n; ++k)
      set(offset + k, offset + k, p.optimal_weight(), EdgeClass::optimal);
    for (int k = 0; k + 1 < p.n; ++k)
      set(offset + k + 1, offset + k, p.suboptimal_weight(), EdgeClass::suboptimal);
    set(offset, offset + p.n - 1, p.heavy_weight(), EdgeClass::heavy);
  }
};

} // namespace

void CycleParams::validate() const {
  if (n < 3)
    throw PreconditionError("cycle half-length must be at least 3");
  if (!(w_max > 0))
    throw PreconditionError("w_max must be positive");
  if (!(eps > 0) || !(eps < w_max / (4 * (n - 2))))
    throw PreconditionError("need 0 < eps < w_max / (4 (n - 2)) = " + to_string(Rational(w_max / (4 * (n - 2)))));
}

Instance gen_cycle(const CycleParams& params, bool embed) {
  params.validate();
  const int n = params.n;
  const auto scale = cycle_scale(n, params.w_max, params.eps);
  const auto light = to_int64(params.light_weight() * scale);
  Builder b(n, scale, embed ? light : 0, embed ? EdgeClass::light : EdgeClass::absent);
  b.place_cycle(0, params);

  InstanceMeta meta;
  meta.family = "cycle";
  meta.n = n;
  meta.w_max = params.w_max;
  meta.eps = params.eps;
  meta.c = 1;
  meta.primes = {n};
  meta.embedded = embed;
  meta.edge_class = b.classes;
  meta.cycle_of_left.assign(static_cast<std::size_t>(n), 0);
  meta.cycle_of_right.assign(static_cast<std::size_t>(n), 0);

  std::vector<bool> support;
  if (!embed)
    for (EdgeClass c : b.classes)
      support.push_back(c != EdgeClass::absent);
  return Instance(n, scale, std::move(b.weights), std::move(meta), std::move(support));
}

Matching optimal_cycle_matching(int n) {
  std::vector<int> partner(static_cast<std::size_t>(n));
  std::iota(partner.begin(), partner.end(), 0);
  return Matching::from_partners(partner);
}

Matching suboptimal_cycle_matching(int n) {
  std::vector<int> partner(static_cast<std::size_t>(n));
  partner[0] = n - 1;
  for (int i = 1; i < n; ++i)
    partner[static_cast<std::size_t>(i)] = i - 1;
  return Matching::from_partners(partner);
}

std::vector<bool> prime_sieve(int limit) {
  if (limit < 2)
    return std::vector<bool>(static_cast<std::size_t>(std::max(limit, 0)) + 1, false);
  std::vector<bool> flags(static_cast<std::size_t>(limit) + 1, true);
  flags[0] = false;
  flags[1] = false;
  for (std::int64_t p = 2; p * p <= limit; ++p)
    if (flags[static_cast<std::size_t>(p)])
      for (std::int64_t q = p * p; q <= limit; q += p)
        flags[static_cast<std::size_t>(q)] = false;
  return flags;
}

int prime_count(int limit) {
  if (limit < 2)
    return 0;
  const auto flags = prime_sieve(limit);
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

PrimeSelection select_primes(int n, int c) {
  if (c < 1 || n < 1)
    throw PreconditionError("prime selection needs n >= 1 and c >= 1");
  PrimeSelection sel;
  sel.n = n;
  sel.c = c;
  sel.lower = Rational(n, 2 * c);
  sel.upper = Rational(n, c);
  sel.lower.canonicalize();
  sel.upper.canonicalize();
  const auto flags = prime_sieve(n);
  for (int p = 2; p <= n && static_cast<int>(sel.primes.size()) < c; ++p) {
    // n / (2c) < p < n / c
    if (flags[static_cast<std::size_t>(p)] && 2 * static_cast<std::int64_t>(c) * p > n && static_cast<std::int64_t>(c) * p < n)
      sel.primes.push_back(p);
  }
  if (static_cast<int>(sel.primes.size()) < c)
    throw PreconditionError("only " + std::to_string(sel.primes.size()) + " primes in (" + to_string(sel.lower) + ", " +
                            to_string(sel.upper) + "), need " + std::to_string(c));
  return sel;
}

int default_cycle_count(int n) {
  if (n < 3)
    throw PreconditionError("default cycle count needs n >= 3");
  const double c = 0.5 * std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(n)));
  return std::max(1, static_cast<int>(std::floor(c)));
}

PrimeCountBounds pi_bounds(std::int64_t n) {
  if (n < 599)
    throw PreconditionError("prime counting bounds hold for n >= 599");
  if (n > (std::int64_t{1} << 40))
    throw PreconditionError("prime counting bounds limited to n <= 2^40");
  const long double x = static_cast<long double>(n);
  const long double lg = std::log(x);
  const long double lower = x / lg * (1.0L + 1.0L / lg);
  const long double upper = x / lg * (1.0L + 1.2762L / lg);
  constexpr long double unit = 1048576.0L; // 2^20
  const auto down = static_cast<std::int64_t>(std::floor(lower * unit)) - 1;
  const auto up = static_cast<std::int64_t>(std::ceil(upper * unit)) + 1;
  PrimeCountBounds out{Rational(mpz_class(static_cast<long>(down)), mpz_class(1L << 20)),
                       Rational(mpz_class(static_cast<long>(up)), mpz_class(1L << 20))};
  out.lower.canonicalize();
  out.upper.canonicalize();
  return out;
}

Instance gen_multicycle(int n, const Rational& w_max, const Rational& eps, std::optional<int> c) {
  if (!(w_max > 0))
    throw PreconditionError("w_max must be positive");
  const int count = c.value_or(default_cycle_count(n));
  const auto sel = select_primes(n, count);
  if (sel.primes.front() < 3)
    throw PreconditionError("selected prime 2 is too small for a heavy cycle");
  // Every cycle needs its own eps range; the largest prime is binding.
  CycleParams largest{sel.primes.back(), w_max, eps};
  largest.validate();

  std::int64_t scale = 2 * den64(w_max);
  for (int p : sel.primes)
    scale = lcm_checked(scale, cycle_scale(p, w_max, eps));
  const auto light = to_int64(Rational(-2 * w_max) * scale);
  Builder b(n, scale, light, EdgeClass::light);

  InstanceMeta meta;
  meta.family = "multicycle";
  meta.n = n;
  meta.w_max = w_max;
  meta.eps = eps;
  meta.c = count;
  meta.primes = sel.primes;
  meta.embedded = true;
  meta.cycle_of_left.assign(static_cast<std::size_t>(n), -1);
  meta.cycle_of_right.assign(static_cast<std::size_t>(n), -1);

  int offset = 0;
  for (std::size_t idx = 0; idx < sel.primes.size(); ++idx) {
    const int p = sel.primes[idx];
    b.place_cycle(offset, CycleParams{p, w_max, eps});
    for (int k = 0; k < p; ++k) {
      meta.cycle_of_left[static_cast<std::size_t>(offset + k)] = static_cast<int>(idx);
      meta.cycle_of_right[static_cast<std::size_t>(offset + k)] = static_cast<int>(idx);
    }
    offset += p;
  }
  for (int q = offset; q < n; ++q)
    b.set(q, q, w_max / 2, EdgeClass::pad);

  meta.edge_class = b.classes;
  return Instance(n, scale, std::move(b.weights), std::move(meta));
}

Matching generated_optimum(const Instance& inst) {
  if (!inst.meta())
    throw PreconditionError("instance has no generator metadata");
  // Optimal cycle edges and pad edges both sit on the diagonal.
  return optimal_cycle_matching(inst.size());
}

Instance shift_weights(const Instance& inst, const Rational& delta) {
  const Rational in_units = delta * inst.scale();
  const auto factor = den64(in_units);
  const auto offset = to_int64(in_units * factor);
  std::int64_t scale;
  if (__builtin_mul_overflow(inst.scale(), factor, &scale))
    throw MagnitudeOverflow("shifted instance scale exceeds 64 bits");

  std::vector<std::int64_t> weights = inst.scaled_weights();
  for (auto& w : weights) {
    if (__builtin_mul_overflow(w, factor, &w) || __builtin_add_overflow(w, offset, &w))
      throw MagnitudeOverflow("shifted weight exceeds 64 bits");
  }
  auto meta = inst.meta();
  if (meta)
    meta->shift += delta;
  return Instance(inst.size(), scale, std::move(weights), std::move(meta), inst.support());
}

} // namespace bplab
