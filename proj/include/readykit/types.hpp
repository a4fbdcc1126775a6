#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace readykit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Library errors that stem from invalid inputs or contract violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Errors raised by iterative solvers that fail to reach tolerance.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Ordered (country, sector) index with a row-major flat layout:
/// flat(c, s) = c * sectorCount() + s.
class CountrySectorIndex {
 public:
  CountrySectorIndex() = default;

  CountrySectorIndex(std::vector<std::string> countries, std::vector<std::string> sectors)
      : countries_(std::move(countries)), sectors_(std::move(sectors)) {
    requireUnique(countries_, "country");
    requireUnique(sectors_, "sector");
  }

  int countryCount() const { return static_cast<int>(countries_.size()); }
  int sectorCount() const { return static_cast<int>(sectors_.size()); }
  int size() const { return countryCount() * sectorCount(); }

  int flat(int country, int sector) const { return country * sectorCount() + sector; }

  std::pair<int, int> unflat(int k) const {
    return {k / sectorCount(), k % sectorCount()};
  }

  const std::vector<std::string>& countries() const { return countries_; }
  const std::vector<std::string>& sectors() const { return sectors_; }

  const std::string& country(int c) const { return countries_.at(c); }
  const std::string& sector(int s) const { return sectors_.at(s); }

  int countryIndex(const std::string& code) const {
    return find(countries_, code, "country");
  }
  int sectorIndex(const std::string& code) const {
    return find(sectors_, code, "sector");
  }

  bool hasCountry(const std::string& code) const { return contains(countries_, code); }
  bool hasSector(const std::string& code) const { return contains(sectors_, code); }

  int flatOf(const std::string& country, const std::string& sector) const {
    return flat(countryIndex(country), sectorIndex(sector));
  }

  std::string label(int k) const {
    auto [c, s] = unflat(k);
    return countries_[c] + ":" + sectors_[s];
  }

  bool operator==(const CountrySectorIndex& other) const {
    return countries_ == other.countries_ && sectors_ == other.sectors_;
  }

 private:
  static bool contains(const std::vector<std::string>& v, const std::string& code) {
    for (const auto& e : v)
      if (e == code) return true;
    return false;
  }

  static int find(const std::vector<std::string>& v, const std::string& code,
                  const char* kind) {
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (v[i] == code) return i;
    throw ValidationError(std::string("unknown ") + kind + " code: " + code);
  }

  static void requireUnique(const std::vector<std::string>& v, const char* kind) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].empty())
        throw ValidationError(std::string("empty ") + kind + " code");
      for (size_t j = i + 1; j < v.size(); ++j)
        if (v[i] == v[j])
          throw ValidationError(std::string("duplicate ") + kind + " code: " + v[i]);
    }
  }

  std::vector<std::string> countries_;
  std::vector<std::string> sectors_;
};

}  // namespace readykit
