#include "hyperavg/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hyperavg::resonance {

SystemSpec::SystemSpec(std::vector<WaveFamily> families)
    : families_(std::move(families)) {
  if (families_.empty()) throw std::invalid_argument("SystemSpec: no families");
  for (std::size_t a = 0; a < families_.size(); ++a)
    for (std::size_t b = a + 1; b < families_.size(); ++b)
      if (std::abs(families_[a].lambda - families_[b].lambda) <= 1e-12)
        throw std::invalid_argument("SystemSpec: speeds must be pairwise distinct");
  coupling_.assign(families_.size() * families_.size() * families_.size(), 0.0);
}

void SystemSpec::set_coupling(int j, int k, int m, double value) {
  const int n = size();
  if (j < 0 || j >= n || k < 0 || k >= n || m < 0 || m >= n)
    throw std::out_of_range("SystemSpec::set_coupling: index");
  coupling_[(std::size_t(j) * n + k) * n + m] = value;
}

double SystemSpec::coupling(int j, int k, int m) const {
  const int n = size();
  if (j < 0 || j >= n || k < 0 || k >= n || m < 0 || m >= n)
    throw std::out_of_range("SystemSpec::coupling: index");
  return coupling_[(std::size_t(j) * n + k) * n + m];
}

namespace {

struct Slot {
  double weight = 0.0; // contribution per unit integer
  int layout_pos = 0;  // position in the (l_t, l_x, l_1..l_n) layout
};

// Shared scaffolding for the small-divisor scan. slot layout positions refer
// to the full tuple (l_t, l_x, l_1..l_n) even when some slots are absent.
std::vector<Slot> small_divisor_slots(const SystemSpec& spec, int j) {
  const int n = spec.size();
  if (j < 0 || j >= n) throw std::out_of_range("check_small_divisors: family index");
  const WaveFamily& fj = spec.families()[j];

  std::vector<Slot> slots;
  if (fj.forcing_period_t) {
    if (!(*fj.forcing_period_t > 0.0)) throw std::invalid_argument("forcing time period must be positive");
    slots.push_back({1.0 / *fj.forcing_period_t, 0});
  }
  if (fj.forcing_period_x) {
    if (!(*fj.forcing_period_x > 0.0)) throw std::invalid_argument("forcing space period must be positive");
    slots.push_back({fj.lambda / *fj.forcing_period_x, 1});
  }
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    const WaveFamily& fk = spec.families()[k];
    if (!fk.init_period)
      throw std::invalid_argument("check_small_divisors: family " + std::to_string(k) +
                                  " has no initial period");
    if (!(*fk.init_period > 0.0)) throw std::invalid_argument("initial period must be positive");
    slots.push_back({(fj.lambda - fk.lambda) / *fk.init_period, 2 + k});
  }
  return slots;
}

ResonanceVerdict scan_small_divisors(const SystemSpec& spec, int j, int bound,
                                     double tol, bool parallel) {
  if (bound < 1) throw std::invalid_argument("check_small_divisors: bound must be >= 1");
  const std::vector<Slot> slots = small_divisor_slots(spec, j);
  const int n = spec.size();
  const int d = int(slots.size());
  const long base = 2L * bound + 1;

  double total_d = 1.0;
  for (int s = 0; s < d; ++s) total_d *= double(base);
  if (total_d > 4e9) throw std::invalid_argument("check_small_divisors: enumeration too large");
  const long long total = (long long)(total_d + 0.5);

  std::vector<Witness> found;

  const auto scan_range = [&](long long lo, long long hi, std::vector<Witness>& out) {
    std::vector<long> digits(d);
    for (long long idx = lo; idx < hi; ++idx) {
      long long rest = idx;
      bool all_zero = true;
      double div = 0.0;
      for (int s = 0; s < d; ++s) {
        const long l = long(rest % base) - bound;
        rest /= base;
        digits[s] = l;
        if (l != 0) all_zero = false;
        div += slots[s].weight * double(l);
      }
      if (all_zero) continue;
      if (std::abs(div) <= tol) {
        Witness w;
        w.integers.assign(2 + n, 0);
        for (int s = 0; s < d; ++s) w.integers[slots[s].layout_pos] = digits[s];
        w.divisor = div;
        out.push_back(std::move(w));
      }
    }
  };

#ifdef _OPENMP
  if (parallel && total > 4096) {
    const int nt = omp_get_max_threads();
    std::vector<std::vector<Witness>> parts(nt);
#pragma omp parallel num_threads(nt)
    {
      const int tid = omp_get_thread_num();
      const long long chunk = (total + nt - 1) / nt;
      const long long lo = std::min<long long>(total, chunk * tid);
      const long long hi = std::min<long long>(total, lo + chunk);
      scan_range(lo, hi, parts[tid]);
    }
    for (auto& p : parts)
      for (auto& w : p) found.push_back(std::move(w));
  } else {
    scan_range(0, total, found);
  }
#else
  (void)parallel;
  scan_range(0, total, found);
#endif

  std::sort(found.begin(), found.end(),
            [](const Witness& a, const Witness& b) { return a.integers < b.integers; });

  ResonanceVerdict v;
  v.resonant = !found.empty();
  v.witnesses = std::move(found);
  v.searched_bound = bound;
  v.tolerance = tol;
  return v;
}

std::vector<double> selectable_frequencies(const Spectrum& s, int max_modes, double tol) {
  std::vector<double> freqs;
  for (const Mode& m : s.modes())
    if (std::abs(m.frequency) > tol) freqs.push_back(m.frequency);
  std::sort(freqs.begin(), freqs.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });
  if (int(freqs.size()) > max_modes) freqs.resize(max_modes);
  return freqs;
}

} // namespace

ResonanceVerdict check_small_divisors(const SystemSpec& spec, int j, int bound, double tol) {
  return scan_small_divisors(spec, j, bound, tol, true);
}

ResonanceVerdict check_small_divisors_serial(const SystemSpec& spec, int j, int bound, double tol) {
  return scan_small_divisors(spec, j, bound, tol, false);
}

ResonanceVerdict check_almost_periodic(const SystemSpec& spec, int j, int max_modes, double tol) {
  if (max_modes < 1) throw std::invalid_argument("check_almost_periodic: max_modes must be >= 1");
  const int n = spec.size();
  if (j < 0 || j >= n) throw std::out_of_range("check_almost_periodic: family index");
  const WaveFamily& fj = spec.families()[j];

  struct FreqSlot {
    double weight;
    int layout_pos;
    std::vector<double> choices; // choices[0] == 0 means "none picked"
  };
  std::vector<FreqSlot> slots;

  {
    FreqSlot t{1.0, 0, {0.0}};
    for (double f : selectable_frequencies(fj.forcing_modes_t, max_modes, tol)) t.choices.push_back(f);
    if (t.choices.size() > 1) slots.push_back(std::move(t));
  }
  {
    FreqSlot x{fj.lambda, 1, {0.0}};
    for (double f : selectable_frequencies(fj.forcing_modes_x, max_modes, tol)) x.choices.push_back(f);
    if (x.choices.size() > 1) slots.push_back(std::move(x));
  }
  for (int k = 0; k < n; ++k) {
    if (k == j) continue;
    FreqSlot s{fj.lambda - spec.families()[k].lambda, 2 + k, {0.0}};
    for (double f : selectable_frequencies(spec.families()[k].init_modes, max_modes, tol))
      s.choices.push_back(f);
    if (s.choices.size() > 1) slots.push_back(std::move(s));
  }

  ResonanceVerdict v;
  v.searched_bound = max_modes;
  v.tolerance = tol;

  const int d = int(slots.size());
  if (d == 0) return v; // nothing to combine: non-resonant

  long long total = 1;
  for (const auto& s : slots) {
    total *= (long long)(s.choices.size());
    if (total > (long long)4e9) throw std::invalid_argument("check_almost_periodic: enumeration too large");
  }

  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    bool any = false;
    double div = 0.0;
    std::vector<double> picks(d, 0.0);
    for (int s = 0; s < d; ++s) {
      const auto& c = slots[s].choices;
      const int sel = int(rest % (long long)c.size());
      rest /= (long long)c.size();
      picks[s] = c[sel];
      if (sel != 0) any = true;
      div += slots[s].weight * c[sel];
    }
    if (!any) continue;
    if (std::abs(div) <= tol) {
      Witness w;
      w.frequencies.assign(2 + n, 0.0);
      for (int s = 0; s < d; ++s) w.frequencies[slots[s].layout_pos] = picks[s];
      w.divisor = div;
      v.witnesses.push_back(std::move(w));
    }
  }

  std::sort(v.witnesses.begin(), v.witnesses.end(),
            [](const Witness& a, const Witness& b) { return a.frequencies < b.frequencies; });
  v.resonant = !v.witnesses.empty();
  return v;
}

ResonanceVerdict check_shallow_water_resonance(const Spectrum& h_modes,
                                               const Spectrum& z0_modes, double tol) {
  ResonanceVerdict v;
  v.tolerance = tol;
  for (const Mode& hm : h_modes.modes()) {
    for (const Mode& zm : z0_modes.modes()) {
      const double mu = hm.frequency, nu = zm.frequency;
      if (std::abs(mu) <= tol && std::abs(nu) <= tol) continue;
      const double dminus = mu - 2.0 * nu;
      const double dplus = mu + 2.0 * nu;
      if (std::abs(dminus) <= tol || std::abs(dplus) <= tol) {
        Witness w;
        w.frequencies = {mu, nu};
        w.divisor = (std::abs(dminus) <= std::abs(dplus)) ? dminus : dplus;
        v.witnesses.push_back(std::move(w));
      }
    }
  }
  std::sort(v.witnesses.begin(), v.witnesses.end(),
            [](const Witness& a, const Witness& b) { return a.frequencies < b.frequencies; });
  v.resonant = !v.witnesses.empty();
  return v;
}

} // namespace hyperavg::resonance
