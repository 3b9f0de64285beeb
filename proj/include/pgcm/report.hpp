#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace pgcm {

struct Violation {
  std::string matrix;
  std::string detail;
};

struct VerificationReport {
  std::string subject;
  std::uint64_t space_size = 0;
  std::int64_t orbit_count = 0;
  std::int64_t expected_count = -1;
  std::vector<std::uint64_t> orbit_sizes;
  std::vector<Violation> violations;
  double elapsed = 0.0;

  bool ok() const { return violations.empty(); }

  // Violations beyond this are counted but not stored.
  static constexpr std::size_t kMaxStored = 50;
  std::uint64_t violation_total = 0;

  void violation(std::string matrix, std::string detail)
  {
    ++violation_total;
    if (violations.size() < kMaxStored)
      violations.push_back({std::move(matrix), std::move(detail)});
  }
};

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace pgcm
