#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "twoaxis/model.hpp"

namespace twoaxis {

enum class SequenceKind { fid, cpmg, custom };

/// Instantaneous pi_y pulse protocol. Pulse positions are stored as fractions
/// of the total evolution time, so one object serves a whole time sweep.
class PulseSequence {
 public:
  static PulseSequence fid();
  static PulseSequence cpmg(int n);
  static PulseSequence spin_echo() { return cpmg(1); }
  static PulseSequence custom(std::vector<double> fractions);

  SequenceKind kind() const { return kind_; }
  int pulse_count() const { return static_cast<int>(fractions_.size()); }
  std::span<const double> fractions() const { return fractions_; }
  std::vector<double> pulse_times(double t) const;

  bool free_evolution() const { return fractions_.empty(); }
  /// Integral of the switching function vanishes.
  bool balanced() const { return balanced_; }

  /// "fid", "cpmg 4" or "custom 0.25,0.75".
  std::string describe() const;

  friend bool operator==(const PulseSequence& a, const PulseSequence& b)
  {
    return a.kind_ == b.kind_ && a.fractions_ == b.fractions_;
  }

 private:
  PulseSequence(SequenceKind kind, std::vector<double> fractions);

  SequenceKind kind_ = SequenceKind::fid;
  std::vector<double> fractions_;
  bool balanced_ = false;
};

/// Sign f_t(t') of the accumulated phase; flips after each pulse.
int switching(const PulseSequence& seq, double t, double t_prime);

/// f~_t(omega) = int_0^t f_t(t') exp(i omega t') dt'.
std::complex<double> filter_fn(const PulseSequence& seq, double t, double omega);

/// exp(-i omega t/2) f~_t(omega): time measured from the sequence midpoint.
std::complex<double> filter_fn_sym(const PulseSequence& seq, double t, double omega);

/// |f~_t(omega)|^2.
double filter_sq(const PulseSequence& seq, double t, double omega);

/// f~_t(0) = int_0^t f_t(t') dt' (exactly zero for balanced sequences).
double filter_at_zero(const PulseSequence& seq, double t);

/// Rotation angle without noise, (B/2) int f_t.
double mean_phase(const PulseSequence& seq, const WorkingPoint& wp, double t);

/// omega^2 |f~_t(omega)|^2 = constant + sum_j weight_j cos(omega * lag_j).
struct FilterSeries {
  struct Term {
    double lag;
    double weight;
  };
  double constant = 0.0;
  std::vector<Term> terms;
};

FilterSeries filter_series(const PulseSequence& seq, double t);

}  // namespace twoaxis
