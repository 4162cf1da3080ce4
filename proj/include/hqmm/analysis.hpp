#pragma once

// Language-level analytics that work for classical and quantum generators
// alike: exhaustive word distributions, block entropy, Hankel blocks and
// trajectory sampling.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqmm/classical.hpp"
#include "hqmm/quantum.hpp"

namespace hqmm {

/// Uniform view of a generator as (state, unnormalized update, mass).
template <class Model>
struct process_traits;

template <>
struct process_traits<HmmModel> {
  using state_type = RealVector;
  using initial_type = ProbVector;

  static state_type initial(const HmmModel& m, const std::optional<initial_type>& init) {
    return init ? init->vector() : default_initial(m);
  }
  static state_type step(const HmmModel& m, std::size_t s, const state_type& x) { return m.transitions[s] * x; }
  static double mass(const state_type& x) { return x.sum(); }
  static state_type normalized(const state_type& x, double mass) { return x / mass; }
};

template <>
struct process_traits<HqmmModel> {
  using state_type = ComplexMatrix;
  using initial_type = DensityMatrix;

  static state_type initial(const HqmmModel& m, const std::optional<initial_type>& init) {
    return init ? init->matrix() : default_initial(m);
  }
  static state_type step(const HqmmModel& m, std::size_t s, const state_type& x) {
    return apply_kraus(m.kraus(s), x);
  }
  static double mass(const state_type& x) { return x.trace().real(); }
  static state_type normalized(const state_type& x, double mass) { return x / mass; }
};

template <class Model>
concept Process = requires(const Model& m) {
  typename process_traits<Model>::state_type;
  { m.alphabet } -> std::convertible_to<Alphabet>;
};

/// All |A|^n words of one length. Index order is lexicographic with the first
/// (earliest) symbol most significant.
struct WordDistribution {
  std::size_t length = 0;
  Alphabet alphabet;
  std::vector<double> probabilities;

  std::size_t index_of(const Word& word) const {
    if (word.size() != length) throw std::invalid_argument("word length differs from distribution length");
    std::size_t idx = 0;
    for (auto s : word) {
      if (s >= alphabet.size()) throw UnknownSymbol("symbol index outside alphabet");
      idx = idx * alphabet.size() + s;
    }
    return idx;
  }

  Word word_at(std::size_t index) const {
    Word w(length);
    for (std::size_t k = length; k-- > 0;) {
      w[k] = index % alphabet.size();
      index /= alphabet.size();
    }
    return w;
  }

  double probability(const Word& word) const { return probabilities[index_of(word)]; }

  double total() const {
    double t = 0.0;
    for (double p : probabilities) t += p;
    return t;
  }
};

inline constexpr std::size_t enumeration_budget = 10'000'000;

namespace detail {

template <Process Model>
void enumerate_subtree(const Model& m, const typename process_traits<Model>::state_type& state, std::size_t depth,
                       std::size_t n, std::size_t prefix, std::vector<double>& out, const Tolerances& tol) {
  using traits = process_traits<Model>;
  const std::size_t k = m.alphabet.size();
  if (depth == n) {
    out[prefix] = clamp_probability(traits::mass(state), tol);
    return;
  }
  for (std::size_t s = 0; s < k; ++s) {
    enumerate_subtree(m, traits::step(m, s, state), depth + 1, n, prefix * k + s, out, tol);
  }
}

}  // namespace detail

/// Exhaustive length-n distribution by depth-first walk of the prefix tree:
/// every interior node's state is shared by all its extensions.
template <Process Model>
WordDistribution enumerate_distribution(const Model& m, std::size_t n,
                                        const std::optional<typename process_traits<Model>::initial_type>& initial =
                                            std::nullopt,
                                        const Tolerances& tol = default_tolerances) {
  const std::size_t k = m.alphabet.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= k;
    if (count > enumeration_budget) {
      throw std::length_error("enumerate_distribution: |A|^n exceeds the budget of " +
                              std::to_string(enumeration_budget) + " words");
    }
  }
  WordDistribution dist{n, m.alphabet, std::vector<double>(count, 0.0)};
  detail::enumerate_subtree(m, process_traits<Model>::initial(m, initial), 0, n, 0, dist.probabilities, tol);
  return dist;
}

/// Shannon entropy in bits, 0 log 0 = 0.
inline double block_entropy(const WordDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

/// Generic word probability through the process traits.
template <Process Model>
double process_word_probability(const Model& m, const typename process_traits<Model>::state_type& start,
                                const Word& word, const Tolerances& tol = default_tolerances) {
  check_word(word, m.alphabet);
  auto state = start;
  for (auto s : word) state = process_traits<Model>::step(m, s, state);
  return clamp_probability(process_traits<Model>::mass(state), tol);
}

/// Finite block of the Hankel matrix. Entry (u, v) is P(v u): the column word
/// v is emitted first, then the row word u.
struct HankelBlock {
  std::vector<Word> row_words;
  std::vector<Word> col_words;
  RealMatrix matrix;
};

/// All words of length 0..max_length in length-then-lexicographic order.
inline std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_length) {
  std::vector<Word> words{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t s = 0; s < alphabet.size(); ++s) {
        Word w = words[i];
        w.push_back(s);
        words.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return words;
}

/// The empty word followed by every single symbol.
inline std::vector<Word> default_hankel_words(const Alphabet& alphabet) { return words_up_to(alphabet, 1); }

template <Process Model>
HankelBlock hankel_block(const Model& m, std::vector<Word> row_words, std::vector<Word> col_words,
                         const std::optional<typename process_traits<Model>::initial_type>& initial = std::nullopt,
                         const Tolerances& tol = default_tolerances) {
  using traits = process_traits<Model>;
  for (const auto& w : row_words) check_word(w, m.alphabet);
  for (const auto& w : col_words) check_word(w, m.alphabet);
  const auto start = traits::initial(m, initial);
  HankelBlock block{std::move(row_words), std::move(col_words), {}};
  block.matrix.resize(static_cast<Eigen::Index>(block.row_words.size()),
                      static_cast<Eigen::Index>(block.col_words.size()));
  for (std::size_t c = 0; c < block.col_words.size(); ++c) {
    auto after_col = start;
    for (auto s : block.col_words[c]) after_col = traits::step(m, s, after_col);
    for (std::size_t r = 0; r < block.row_words.size(); ++r) {
      auto state = after_col;
      for (auto s : block.row_words[r]) state = traits::step(m, s, state);
      block.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          clamp_probability(traits::mass(state), tol);
    }
  }
  return block;
}

template <Process Model>
HankelBlock hankel_block(const Model& m) {
  return hankel_block(m, default_hankel_words(m.alphabet), default_hankel_words(m.alphabet));
}

/// Rank of a Hankel block: no classical generator of the process has fewer
/// internal states than this.
template <Process Model>
std::size_t state_count_lower_bound(const Model& m, std::vector<Word> row_words, std::vector<Word> col_words,
                                    std::optional<double> tol = std::nullopt) {
  return numerical_rank(hankel_block(m, std::move(row_words), std::move(col_words)).matrix, tol);
}

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw. Written
/// out rather than using std::uniform_real_distribution, whose algorithm is
/// implementation-defined.
inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draw `length` symbols by iterated conditional update. Per-step
/// probabilities are clamped at zero and renormalized before drawing.
template <Process Model>
Word sample_trajectory(const Model& m, std::size_t length, std::mt19937_64& rng,
                       const std::optional<typename process_traits<Model>::initial_type>& initial = std::nullopt,
                       const Tolerances& tol = default_tolerances) {
  using traits = process_traits<Model>;
  const std::size_t k = m.alphabet.size();
  Word out;
  out.reserve(length);
  if (length == 0) return out;
  auto state = traits::initial(m, initial);
  std::vector<typename traits::state_type> next(k);
  std::vector<double> p(k);
  for (std::size_t t = 0; t < length; ++t) {
    double total = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      next[s] = traits::step(m, s, state);
      p[s] = std::max(0.0, traits::mass(next[s]));
      total += p[s];
    }
    if (total <= tol.impossible_outcome) throw NumericalError("sample_trajectory: no outcome has positive probability");
    const double u = unit_interval(rng) * total;
    std::size_t chosen = k - 1;
    double acc = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      acc += p[s];
      if (u < acc && p[s] > 0.0) {
        chosen = s;
        break;
      }
    }
    while (p[chosen] <= 0.0) --chosen;  // u landed on rounding slack past the last positive bin
    out.push_back(chosen);
    state = traits::normalized(next[chosen], p[chosen]);
  }
  return out;
}

/// Seeded entry point: std::mt19937_64 (the standard's 64-bit twisted GFSR,
/// whose output sequence is fixed by the C++ standard) seeded with `seed`.
template <Process Model>
Word sample_trajectory(const Model& m, std::size_t length, std::uint64_t seed,
                       const std::optional<typename process_traits<Model>::initial_type>& initial = std::nullopt) {
  std::mt19937_64 rng(seed);
  return sample_trajectory(m, length, rng, initial);
}

}  // namespace hqmm
