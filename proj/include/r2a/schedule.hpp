#pragma once

#include "r2a/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace r2a {

struct TrainSchedule {
  double initial_lr = 0.001;
  double divisor = 10.0;
  int patience = 3;          // evaluations without improvement before decay
  double delta = 1e-4;       // improvement threshold
  int max_epochs = 20;
  double lr_floor = 1e-6;    // training stops once a decay would cross this

  void validate() const {
    if (divisor <= 1.0) throw std::invalid_argument("TrainSchedule: divisor must be > 1");
    if (patience < 1) throw std::invalid_argument("TrainSchedule: patience must be >= 1");
    if (initial_lr <= 0) throw std::invalid_argument("TrainSchedule: initial_lr must be > 0");
  }
};

// Stateless plateau rule over the full dev-metric history (higher = better).
// An evaluation improves when it beats the best of all earlier evaluations by
// more than delta; the first evaluation sets the baseline and counts as
// non-improving. When `patience` consecutive evaluations fail to improve, the
// rate divides (never below the floor) and the failure count restarts.
inline double lr_plateau_step(const std::vector<double>& history, const TrainSchedule& schedule,
                              double current_lr) {
  if (history.empty()) throw std::invalid_argument("lr_plateau_step: empty history");
  schedule.validate();
  double lr = current_lr;
  double best = history[0];
  int fails = 1;  // the baseline evaluation
  auto maybe_decay = [&](bool last) {
    if (fails >= schedule.patience) {
      if (last) lr = std::max(lr / schedule.divisor, schedule.lr_floor);
      fails = 0;
    }
  };
  maybe_decay(history.size() == 1);
  for (size_t i = 1; i < history.size(); ++i) {
    if (history[i] > best + schedule.delta) {
      fails = 0;
    } else {
      ++fails;
    }
    best = std::max(best, history[i]);
    maybe_decay(i + 1 == history.size());
  }
  return lr;
}

// Incremental form used by the training loops.
class PlateauScheduler {
 public:
  PlateauScheduler(const TrainSchedule& schedule, double lr)
      : schedule_(schedule), lr_(lr) {
    schedule_.validate();
  }

  // Feed one dev evaluation (higher = better); returns the rate to use next.
  double update(double metric) {
    if (!seen_) {
      seen_ = true;
      best_ = metric;
      fails_ = 1;
    } else if (metric > best_ + schedule_.delta) {
      fails_ = 0;
      best_ = metric;
    } else {
      ++fails_;
      best_ = std::max(best_, metric);
    }
    if (fails_ >= schedule_.patience) {
      hit_floor_ = lr_ <= schedule_.lr_floor;
      lr_ = std::max(lr_ / schedule_.divisor, schedule_.lr_floor);
      fails_ = 0;
    }
    return lr_;
  }

  double lr() const { return lr_; }
  // true once a decay was requested while already at the floor
  bool exhausted() const { return hit_floor_; }

 private:
  TrainSchedule schedule_;
  double lr_;
  double best_ = 0.0;
  bool seen_ = false;
  bool hit_floor_ = false;
  int fails_ = 0;
};

// Cyclic shuffled index batches; reshuffles at each epoch boundary.
class Batcher {
 public:
  Batcher(int n, int batch_size, RngStream stream)
      : n_(n), batch_(std::min(batch_size, n)), stream_(std::move(stream)) {
    if (n < 1) throw std::invalid_argument("Batcher: empty dataset");
    order_.resize(n);
    for (int i = 0; i < n; ++i) order_[i] = i;
    stream_.shuffle(order_);
  }

  std::vector<int> next() {
    std::vector<int> out;
    out.reserve(batch_);
    for (int k = 0; k < batch_; ++k) {
      if (pos_ == n_) {
        stream_.shuffle(order_);
        pos_ = 0;
      }
      out.push_back(order_[pos_++]);
    }
    return out;
  }

  int batches_per_epoch() const { return (n_ + batch_ - 1) / batch_; }

 private:
  int n_;
  int batch_;
  RngStream stream_;
  std::vector<int> order_;
  int pos_ = 0;
};

}  // namespace r2a
