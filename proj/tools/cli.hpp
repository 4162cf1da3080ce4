#pragma once

// Command-line front end. run_command() holds all behaviour so tests can drive
// it in-process; main() only forwards argv.
//
// Exit codes: 0 success, 1 invalid model (syntax or validation) or failed
// computation, 2 usage error (bad flags, unknown symbols, unreadable files).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hqmm/hqmm.hpp"

namespace hqmm::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed notation with 12 digits after the point, independent of locale.
inline std::string fmt(double x) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // no "-0.000000000000"
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

inline std::string fmt(const complex& z) {
  if (std::abs(z.imag()) < 1e-15) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

template <class Matrix>
void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << fmt(m(i, j));
    out << "\n";
  }
}

/// Models usable for language-level commands. MPS files are reduced to their
/// HQMM on load.
using LanguageModel = std::variant<HmmModel, HqmmModel>;

inline LanguageModel as_language_model(const io::AnyModel& model) {
  if (const auto* h = std::get_if<HmmModel>(&model)) return *h;
  if (const auto* q = std::get_if<HqmmModel>(&model)) return *q;
  return mps_to_hqmm(std::get<MpsModel>(model));
}

inline io::ModelFile read_model_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("model file not found: " + path);
  return io::load_model(path);
}

/// --initial values:
///   default   model's own initial state, else the stationary state
///   steady    stationary state
///   mixed     uniform distribution / maximally mixed state
///   basis:K   classical state K / projector |K><K|
///   plus      equal superposition of all basis states (quantum models)
///   diag:p0,p1,...  explicit diagonal distribution
inline std::optional<ProbVector> parse_initial(const HmmModel& m, const std::string& spec) {
  const Eigen::Index d = m.states();
  if (spec.empty() || spec == "default") return std::nullopt;
  if (spec == "steady") return steady_state(m).distribution;
  if (spec == "mixed") return ProbVector::uniform(d);
  if (spec.rfind("basis:", 0) == 0) {
    const long k = std::stol(spec.substr(6));
    if (k < 0 || k >= d) throw UsageError("--initial basis index out of range");
    RealVector v = RealVector::Zero(d);
    v[k] = 1.0;
    return ProbVector(v);
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> xs;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) xs.push_back(std::stod(item));
    if (static_cast<Eigen::Index>(xs.size()) != d) throw UsageError("--initial diag needs one entry per state");
    return ProbVector(Eigen::Map<RealVector>(xs.data(), d));
  }
  throw UsageError("unsupported --initial '" + spec + "' for a classical model");
}

inline std::optional<DensityMatrix> parse_initial(const HqmmModel& m, const std::string& spec) {
  const Eigen::Index d = m.dim;
  if (spec.empty() || spec == "default") return std::nullopt;
  if (spec == "steady") return steady_state(m).state;
  if (spec == "mixed") return DensityMatrix::maximally_mixed(d);
  if (spec == "plus") return DensityMatrix::pure(ComplexVector::Ones(d));
  if (spec.rfind("basis:", 0) == 0) {
    const long k = std::stol(spec.substr(6));
    if (k < 0 || k >= d) throw UsageError("--initial basis index out of range");
    return DensityMatrix::basis(d, k);
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> xs;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) xs.push_back(std::stod(item));
    if (static_cast<Eigen::Index>(xs.size()) != d) throw UsageError("--initial diag needs one entry per state");
    RealVector v = Eigen::Map<RealVector>(xs.data(), d);
    return DensityMatrix(v.cast<complex>().asDiagonal().toDenseMatrix());
  }
  throw UsageError("unsupported --initial '" + spec + "'");
}

/// Word-set syntax for Hankel blocks: "upto:K" (all words of length <= K) or
/// a ';'-separated list in which an empty item is the empty word.
inline std::vector<Word> parse_word_set(const Alphabet& alphabet, const std::string& spec) {
  if (spec.rfind("upto:", 0) == 0) return words_up_to(alphabet, std::stoul(spec.substr(5)));
  std::vector<Word> words;
  std::size_t start = 0;
  while (true) {
    const auto sep = spec.find(';', start);
    words.push_back(alphabet.parse_word(std::string_view(spec).substr(start, sep - start)));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return words;
}

inline void write_distribution_csv(std::ostream& os, const WordDistribution& dist) {
  os << "word,probability\n";
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    os << dist.alphabet.format_word(dist.word_at(i)) << "," << fmt(dist.probabilities[i]) << "\n";
  }
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
}

struct ScanPoint {
  double phi;
  double xi;
  double h3;
};

/// Block entropy of length-3 words from the stationary state on an inclusive
/// phi in [0, pi] by xi in [0, 2 pi] grid.
inline std::vector<ScanPoint> scan_entropy(std::size_t phi_steps, std::size_t xi_steps) {
  using std::numbers::pi;
  std::vector<ScanPoint> out;
  out.reserve(phi_steps * xi_steps);
  auto grid = [](std::size_t i, std::size_t n, double hi) { return n == 1 ? 0.0 : hi * i / double(n - 1); };
  for (std::size_t i = 0; i < phi_steps; ++i) {
    for (std::size_t j = 0; j < xi_steps; ++j) {
      const cluster::MeasurementBasis basis{grid(i, phi_steps, pi), grid(j, xi_steps, 2 * pi)};
      const auto model = cluster::cluster_kraus(basis);
      out.push_back({basis.phi, basis.xi, block_entropy(enumerate_distribution(model, 3))});
    }
  }
  return out;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and quantum hidden Markov generators", "hqmm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, word, initial, csv_path, rows_spec, cols_spec, to_kind, output;
  std::size_t n = 0;
  std::optional<double> rank_tol;
  std::uint64_t seed = 0;
  double phi = 0.0, xi = 0.0;
  std::size_t phi_steps = 33, xi_steps = 33;

  auto* validate = app.add_subcommand("validate", "Parse and validate a model file");
  validate->add_option("file", file, "Model file")->required();

  auto* steady = app.add_subcommand("steady", "Print the stationary state");
  steady->add_option("file", file, "Model file")->required();

  auto* wordprob = app.add_subcommand("wordprob", "Probability of one word");
  wordprob->add_option("file", file, "Model file")->required();
  wordprob->add_option("word", word, "Word (plain string, or comma separated for multi-character symbols)")
      ->required();
  wordprob->add_option("--initial", initial, "default|steady|mixed|plus|basis:K|diag:p0,p1,...");

  auto* dist = app.add_subcommand("dist", "All word probabilities of one length");
  dist->add_option("file", file, "Model file")->required();
  dist->add_option("-n", n, "Word length")->required();
  dist->add_option("--csv", csv_path, "Also write word,probability CSV here");
  dist->add_option("--initial", initial, "Initial state");

  auto* entropy = app.add_subcommand("entropy", "Block entropy in bits");
  entropy->add_option("file", file, "Model file")->required();
  entropy->add_option("-n", n, "Word length")->required();
  entropy->add_option("--initial", initial, "Initial state");

  auto* hankel = app.add_subcommand("hankel", "Hankel block and its numerical rank");
  hankel->add_option("file", file, "Model file")->required();
  hankel->add_option("--rows", rows_spec, "Row words: upto:K or ';'-separated list (empty item = empty word)");
  hankel->add_option("--cols", cols_spec, "Column words, same syntax");
  hankel->add_option("--tol", rank_tol, "Singular value threshold (default: automatic)");

  auto* convert = app.add_subcommand("convert", "Convert a classical model to an HQMM");
  convert->add_option("file", file, "Classical model file")->required();
  convert->add_option("--to", to_kind, "hqmm-embed or hqmm-pure")
      ->required()
      ->check(CLI::IsMember({"hqmm-embed", "hqmm-pure"}));
  convert->add_option("-o", output, "Output file")->required();

  auto* cl = app.add_subcommand("cluster", "Cluster-state read-out model");
  cl->add_option("--phi", phi, "Measurement angle phi (radians)")->required();
  cl->add_option("--xi", xi, "Measurement phase xi (radians)")->required();
  cl->require_subcommand(1);
  auto* cl_kraus = cl->add_subcommand("kraus", "Print the model file");
  auto* cl_dist = cl->add_subcommand("dist", "Stationary word distribution");
  cl_dist->add_option("-n", n, "Word length")->required();
  auto* cl_h3 = cl->add_subcommand("h3", "Closed-form length-3 block entropy");

  auto* scan = app.add_subcommand("scan-entropy", "Length-3 block entropy over a (phi, xi) grid as CSV");
  scan->add_option("--phi-steps", phi_steps, "Grid points in phi over [0, pi]")->check(CLI::PositiveNumber);
  scan->add_option("--xi-steps", xi_steps, "Grid points in xi over [0, 2 pi]")->check(CLI::PositiveNumber);
  scan->add_option("-o", output, "CSV output file")->required();

  auto* sample = app.add_subcommand("sample", "Sample a trajectory");
  sample->add_option("file", file, "Model file")->required();
  sample->add_option("-n", n, "Trajectory length")->required();
  sample->add_option("--seed", seed, "Random seed")->required();
  sample->add_option("--initial", initial, "Initial state");

  std::vector<const char*> argv{"hqmm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto with_model = [&](auto&& fn) {
    const auto model = as_language_model(read_model_file(file).model);
    std::visit(fn, model);
  };

  try {
    if (*validate) {
      const auto f = read_model_file(file);
      out << "ok: " << f.kind << " model";
      if (!f.name.empty()) out << " '" << f.name << "'";
      out << "\n";
    } else if (*steady) {
      with_model([&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HmmModel>) {
          const auto ss = steady_state(m);
          out << "unique: " << (ss.unique ? "true" : "false") << "\n";
          print_matrix(out, ss.distribution.vector().transpose());
        } else {
          const auto fp = steady_state(m);
          out << "unique: " << (fp.unique ? "true" : "false") << "\n";
          print_matrix(out, fp.state.matrix());
        }
      });
    } else if (*wordprob) {
      with_model([&](const auto& m) {
        const Word w = m.alphabet.parse_word(word);
        out << fmt(word_probability(m, w, parse_initial(m, initial))) << "\n";
      });
    } else if (*dist) {
      with_model([&](const auto& m) {
        const auto d = enumerate_distribution(m, n, parse_initial(m, initial));
        for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
          out << d.alphabet.format_word(d.word_at(i)) << " " << fmt(d.probabilities[i]) << "\n";
        }
        if (!csv_path.empty()) {
          std::ostringstream csv;
          write_distribution_csv(csv, d);
          write_file(csv_path, csv.str());
        }
      });
    } else if (*entropy) {
      with_model([&](const auto& m) {
        out << fmt(block_entropy(enumerate_distribution(m, n, parse_initial(m, initial)))) << "\n";
      });
    } else if (*hankel) {
      with_model([&](const auto& m) {
        auto rws = rows_spec.empty() ? default_hankel_words(m.alphabet) : parse_word_set(m.alphabet, rows_spec);
        auto cws = cols_spec.empty() ? default_hankel_words(m.alphabet) : parse_word_set(m.alphabet, cols_spec);
        const auto block = hankel_block(m, std::move(rws), std::move(cws));
        print_matrix(out, block.matrix);
        out << "rank = " << numerical_rank(block.matrix, rank_tol) << "\n";
      });
    } else if (*convert) {
      const auto f = read_model_file(file);
      const auto* hmm = std::get_if<HmmModel>(&f.model);
      if (!hmm) throw UsageError("convert expects a classical (hmm) model");
      HqmmModel q;
      try {
        q = to_kind == "hqmm-embed" ? embed_classical(*hmm) : pure_from_reversible(*hmm);
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
      }
      write_file(output, io::serialize_model(q, f.name.empty() ? "" : f.name + " (" + to_kind + ")", f.source));
      out << "wrote " << output << "\n";
    } else if (*cl) {
      const cluster::MeasurementBasis basis{phi, xi};
      if (*cl_kraus) {
        out << io::serialize_model(cluster::cluster_kraus(basis), "cluster read-out");
      } else if (*cl_dist) {
        const auto d = enumerate_distribution(cluster::cluster_kraus(basis), n);
        for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
          out << d.alphabet.format_word(d.word_at(i)) << " " << fmt(d.probabilities[i]) << "\n";
        }
      } else if (*cl_h3) {
        out << fmt(cluster::h3_closed_form(basis)) << "\n";
      }
    } else if (*scan) {
      const auto points = scan_entropy(phi_steps, xi_steps);
      std::ostringstream csv;
      csv << "phi,xi,H3\n";
      double best = 0.0;
      for (const auto& p : points) {
        csv << fmt(p.phi) << "," << fmt(p.xi) << "," << fmt(p.h3) << "\n";
        best = std::max(best, p.h3);
      }
      write_file(output, csv.str());
      out << "wrote " << points.size() << " points to " << output << "; max H3 = " << fmt(best) << "\n";
    } else if (*sample) {
      with_model([&](const auto& m) {
        out << m.alphabet.format_word(sample_trajectory(m, n, seed, parse_initial(m, initial))) << "\n";
      });
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownSymbol& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const io::ParseError& e) {
    err << "error: " << file << ": " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << file << ": validation failed\n" << e.what();
    return 1;
  } catch (const std::logic_error& e) {  // stol/stod failures and bad arguments
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hqmm::cli
