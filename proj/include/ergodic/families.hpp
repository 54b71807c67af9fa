#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "cocycle.hpp"

namespace ergodic {

// A graph, its cocycle and a function, viewed together.
struct Instance {
  const WeightedGraph& graph;
  const Cocycle& rho;
  std::span<const double> f;
};

struct FamilyFlags {
  bool finitely_based = true;
  bool upward_continuous = false;
  std::optional<double> rho_approximable_eps;
};

// A family of G-connected vertex sets decided from the set's running summary.
// Every algorithm here only asks about connected sets, so connectivity is not re-checked.
class CellFamily {
 public:
  virtual ~CellFamily() = default;
  virtual bool admits(const SetSummary& s) const = 0;
  // Lower is preferred when growing candidates.
  virtual double growth_key(const SetSummary&) const { return 0; }
  virtual FamilyFlags flags() const { return {}; }
  virtual std::string name() const = 0;
};

inline bool family_contains(const Instance& in, const CellFamily& fam, std::span<const Vertex> set) {
  return !set.empty() && is_connected_set(in.graph, set) && fam.admits(summarize(in.rho, in.f, set));
}

class AllConnectedFamily final : public CellFamily {
 public:
  bool admits(const SetSummary&) const override { return true; }
  FamilyFlags flags() const override { return {true, true, std::nullopt}; }
  std::string name() const override { return "connected"; }
};

class ExactSizeFamily final : public CellFamily {
 public:
  explicit ExactSizeFamily(std::size_t k) : k_(k) {}
  bool admits(const SetSummary& s) const override { return s.count == k_; }
  std::string name() const override { return "size=" + std::to_string(k_); }

 private:
  std::size_t k_;
};

// Connected sets with rho^max ratio at least L.
class LargeRatioFamily final : public CellFamily {
 public:
  explicit LargeRatioFamily(double L) : L_(L) {}
  bool admits(const SetSummary& s) const override { return s.rho_max_ratio() >= L_; }
  FamilyFlags flags() const override { return {true, true, std::nullopt}; }
  std::string name() const override { return "ratio>=" + std::to_string(L_); }

 private:
  double L_;
};

// λ-central connected sets with rho^max ratio at least L.
class CentralFamily final : public CellFamily {
 public:
  CentralFamily(double lambda, double L) : lambda_(lambda), L_(L) {}
  bool admits(const SetSummary& s) const override {
    return std::abs(s.average()) < lambda_ && s.rho_max_ratio() >= L_;
  }
  double growth_key(const SetSummary& s) const override { return std::abs(s.average()); }
  std::string name() const override { return "central(" + std::to_string(lambda_) + "," + std::to_string(L_) + ")"; }
  double lambda() const { return lambda_; }
  double ratio_floor() const { return L_; }

 private:
  double lambda_, L_;
};

// Another family intersected with a ratio floor.
class RatioFloorFamily final : public CellFamily {
 public:
  RatioFloorFamily(const CellFamily& base, double L) : base_(base), L_(L) {}
  bool admits(const SetSummary& s) const override { return s.rho_max_ratio() >= L_ && base_.admits(s); }
  double growth_key(const SetSummary& s) const override { return base_.growth_key(s); }
  FamilyFlags flags() const override { return base_.flags(); }
  std::string name() const override { return base_.name() + "&ratio>=" + std::to_string(L_); }

 private:
  const CellFamily& base_;
  double L_;
};

}  // namespace ergodic
