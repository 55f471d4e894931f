#include "sagnacsim/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagnacsim {

void RateModel::validate() const {
  const bool rates_ok = pair_rate_ref_cps >= 0.0 && dark_rate_1_cps >= 0.0 &&
                        dark_rate_2_cps >= 0.0 && background_cps >= 0.0 &&
                        repetition_rate_hz >= 0.0 && power_mw >= 0.0 &&
                        reference_power_mw > 0.0;
  if (!rates_ok) throw std::invalid_argument("rate-model rates must be nonnegative");
  const bool eff_ok = detector_eff_1 >= 0.0 && detector_eff_1 <= 1.0 &&
                      detector_eff_2 >= 0.0 && detector_eff_2 <= 1.0 &&
                      optical_efficiency >= 0.0 && optical_efficiency <= 1.0;
  if (!eff_ok) throw std::invalid_argument("efficiencies must lie in [0, 1]");
  if (dead_time_s < 0.0 || timing_jitter_s < 0.0) {
    throw std::invalid_argument("detector time constants must be nonnegative");
  }
}

double expected_rate_from_prob(double prob, const RateModel& m) {
  double rate = m.pair_rate_cps() * prob + m.background_cps;
  if (m.apply_dead_time && m.dead_time_s > 0.0) {
    rate = rate / (1.0 + rate * m.dead_time_s);
  }
  return rate;
}

double expected_rate(const TwoQubitState& rho, const MeasurementSetting& s,
                     const RateModel& m) {
  m.validate();
  return expected_rate_from_prob(coincidence_prob(rho, s.theta1_deg, s.theta2_deg), m);
}

CountRecord draw_count(const MeasurementSetting& s, double rate_cps,
                       double accumulation_s, Rng& rng) {
  CountRecord rec;
  rec.setting = s;
  rec.accumulation_s = accumulation_s;
  rec.expected_rate_cps = rate_cps;
  rec.count = rng.poisson(rate_cps * accumulation_s);
  return rec;
}

std::vector<CountRecord> simulate_counts(const TwoQubitState& rho,
                                         const std::vector<MeasurementSetting>& settings,
                                         const RateModel& m, double accumulation_s,
                                         std::uint64_t seed) {
  if (!(accumulation_s > 0.0)) {
    throw std::invalid_argument("accumulation time must be positive");
  }
  m.validate();
  std::vector<CountRecord> records;
  records.reserve(settings.size());
  for (std::size_t k = 0; k < settings.size(); ++k) {
    Rng rng(substream_seed(seed, k));
    records.push_back(draw_count(settings[k], expected_rate(rho, settings[k], m),
                                 accumulation_s, rng));
  }
  return records;
}

namespace {

double subtracted_count(const CountRecord& rec, double subtract_cps) {
  return std::max(0.0, static_cast<double>(rec.count) - subtract_cps * rec.accumulation_s);
}

}  // namespace

Estimate visibility_from_records(const std::vector<CountRecord>& records,
                                 double subtract_background_cps) {
  if (records.size() < 2) {
    throw std::invalid_argument("visibility needs at least 2 records");
  }
  std::size_t i_max = 0, i_min = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].count > records[i_max].count) i_max = i;
    if (records[i].count < records[i_min].count) i_min = i;
  }
  const double a = subtracted_count(records[i_max], subtract_background_cps);
  const double b = subtracted_count(records[i_min], subtract_background_cps);
  const double sum = a + b;
  if (!(sum > 0.0)) {
    throw std::invalid_argument("visibility undefined: extreme counts sum to zero");
  }
  Estimate est;
  est.value = (a - b) / sum;
  // Poisson variance of the raw counts survives the constant subtraction
  const double var_a = static_cast<double>(records[i_max].count);
  const double var_b = static_cast<double>(records[i_min].count);
  const double da = 2.0 * b / (sum * sum);
  const double db = -2.0 * a / (sum * sum);
  est.sigma = std::sqrt(da * da * var_a + db * db * var_b);
  return est;
}

std::vector<MeasurementSetting> chsh_settings(double a_deg, double ap_deg,
                                              double b_deg, double bp_deg) {
  const std::pair<double, double> pairs[4] = {
      {a_deg, b_deg}, {a_deg, bp_deg}, {ap_deg, b_deg}, {ap_deg, bp_deg}};
  const char* pair_names[4] = {"ab", "ab'", "a'b", "a'b'"};
  const char* outcome_names[4] = {"++", "+-", "-+", "--"};
  std::vector<MeasurementSetting> settings;
  settings.reserve(16);
  for (int j = 0; j < 4; ++j) {
    const auto [t1, t2] = pairs[j];
    const double offsets[4][2] = {{0, 0}, {0, 90}, {90, 0}, {90, 90}};
    for (int o = 0; o < 4; ++o) {
      settings.push_back({std::string(pair_names[j]) + ":" + outcome_names[o],
                          t1 + offsets[o][0], t2 + offsets[o][1]});
    }
  }
  return settings;
}

Estimate chsh_from_records(const std::vector<CountRecord>& records,
                           double subtract_background_cps) {
  if (records.size() != 16) {
    throw std::invalid_argument("CHSH estimation needs exactly the 16 canonical records");
  }
  // outcome signs within a pair, order (++, +-, -+, --)
  const double sign[4] = {+1.0, -1.0, -1.0, +1.0};
  // pair signs in S = E(ab) - E(ab') + E(a'b) + E(a'b')
  const double pair_sign[4] = {+1.0, -1.0, +1.0, +1.0};
  double s = 0.0, var_s = 0.0;
  for (int j = 0; j < 4; ++j) {
    double n[4], n_raw[4], total = 0.0;
    for (int o = 0; o < 4; ++o) {
      const auto& rec = records[4 * j + o];
      n_raw[o] = static_cast<double>(rec.count);
      n[o] = subtracted_count(rec, subtract_background_cps);
      total += n[o];
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("CHSH undefined: one angle pair has zero total counts");
    }
    double e = 0.0;
    for (int o = 0; o < 4; ++o) e += sign[o] * n[o];
    e /= total;
    double var_e = 0.0;
    for (int o = 0; o < 4; ++o) {
      const double de = (sign[o] - e) / total;
      var_e += de * de * n_raw[o];
    }
    s += pair_sign[j] * e;
    var_s += var_e;
  }
  return {std::abs(s), std::sqrt(var_s)};
}

}  // namespace sagnacsim
