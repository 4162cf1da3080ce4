#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hqmm {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module. Defaults are the values the
/// library is tested against; callers may pass a modified copy.
struct Tolerances {
  double hermitian = 1e-10;        // ||M - M^dagger||_max for density matrices
  double trace = 1e-10;            // |tr(rho) - 1|
  double psd = 1e-10;              // smallest admissible eigenvalue is -psd
  double probability_sum = 1e-12;  // probability vectors sum to one
  double stochastic = 1e-12;       // column sums of sum_s T_s
  double completeness = 1e-10;     // sum K^dagger K == identity
  double zero_entry = 1e-14;       // entries below this count as zero in structure checks
  double fixed_point = 1e-8;       // singular values of (L - 1) treated as zero
  double impossible_outcome = 1e-14;
  double negative_probability = 1e-8;  // traces below -this are a hard error
  double projector = 1e-10;        // projector / unitary / isometry checks
};

inline constexpr Tolerances default_tolerances{};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownSymbol : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ImpossibleOutcome : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One violated condition. `where` names the object (symbol, column, field),
/// `message` says what is wrong with it.
struct Diagnostic {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return diagnostics.empty(); }
  explicit operator bool() const noexcept { return ok(); }
  void add(std::string where, std::string message) {
    diagnostics.push_back({std::move(where), std::move(message)});
  }
  void merge(const ValidationReport& other, std::string_view prefix = {}) {
    for (const auto& d : other.diagnostics) {
      add(prefix.empty() ? d.where : std::string(prefix) + "." + d.where, d.message);
    }
  }
  std::string to_string() const {
    std::string out;
    for (const auto& d : diagnostics) {
      out += d.where + ": " + d.message + "\n";
    }
    return out;
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Ordered output alphabet. Symbols are arbitrary non-empty strings; a word is
/// a sequence of symbol indices read left to right in time.
using Word = std::vector<std::size_t>;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw std::invalid_argument("alphabet: empty symbol name");
      for (std::size_t j = 0; j < i; ++j) {
        if (symbols_[j] == symbols_[i]) {
          throw std::invalid_argument("alphabet: duplicate symbol '" + symbols_[i] + "'");
        }
      }
    }
  }

  static Alphabet numeric(std::size_t n) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(std::to_string(i));
    return Alphabet(std::move(s));
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& operator[](std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  std::size_t index_of(std::string_view symbol) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] == symbol) return i;
    }
    throw UnknownSymbol("unknown symbol '" + std::string(symbol) + "'");
  }

  bool single_character() const noexcept {
    for (const auto& s : symbols_) {
      if (s.size() != 1) return false;
    }
    return true;
  }

  /// Single-character alphabets read words as plain strings ("0110");
  /// otherwise symbols are comma separated ("up,down,up").
  Word parse_word(std::string_view text) const {
    Word word;
    if (text.empty()) return word;
    if (single_character()) {
      for (char c : text) word.push_back(index_of(std::string_view(&c, 1)));
      return word;
    }
    std::size_t start = 0;
    while (true) {
      auto comma = text.find(',', start);
      word.push_back(index_of(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return word;
  }

  std::string format_word(const Word& word) const {
    std::string out;
    const bool compact = single_character();
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (!compact && i > 0) out += ',';
      out += (*this)[word[i]];
    }
    return out;
  }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

inline void check_word(const Word& word, const Alphabet& alphabet) {
  for (auto s : word) {
    if (s >= alphabet.size()) {
      throw UnknownSymbol("symbol index " + std::to_string(s) + " outside alphabet of size " +
                          std::to_string(alphabet.size()));
    }
  }
}

}  // namespace hqmm
