#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "momtensor/error.hpp"
#include "momtensor/gaussian.hpp"
#include "momtensor/moments.hpp"
#include "momtensor/partitions.hpp"
#include "momtensor/samples.hpp"
#include "momtensor/tensor.hpp"
#include "momtensor/tensor_io.hpp"

namespace momtensor::cli {

namespace {

// Bad flags or inputs that only the front end can detect.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  bool has_s = false;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  double tol = 5.0;
  std::string format;
  std::string out_path;
  std::string params_path;
  std::string samples_path;
  bool central = false;
  bool as_cov4 = false;
  bool list = false;
};

void emit(const Options& opt, std::string_view payload, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << payload;
    out.flush();
  } else {
    write_file_atomic(opt.out_path, payload);
  }
}

std::string encode(const Tensor& t, const std::string& format) {
  if (format.empty() || format == "json") return tensor_to_json(t);
  if (format == "binary") return tensor_to_binary(t);
  throw UsageError("tensor output supports --format json or binary, not " + format);
}

GaussianVectorParams load_vector_params(const std::string& path) {
  GaussianParams params = gaussian_params_from_json(read_file(path));
  if (auto* v = std::get_if<GaussianVectorParams>(&params)) return *v;
  throw UsageError("this command needs vector parameters {\"mean\", \"cov\"}; closed-form moments of "
                   "Gaussian matrices are not available");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_snd_moment(const Options& opt, std::ostream& out) {
  Tensor m;
  try {
    m = snd_moment(opt.n, opt.k);
  } catch (const GuardError& e) {
    throw UsageError(e.what());
  }
  emit(opt, encode(m, opt.format), out);
  return kOk;
}

int cmd_gauss_moment(const Options& opt, std::ostream& out) {
  const GaussianVectorParams params = load_vector_params(opt.params_path);
  emit(opt, encode(gaussian_moment(params, opt.k), opt.format), out);
  return kOk;
}

int cmd_estimate(const Options& opt, std::ostream& out) {
  const SampleSet samples = samples_from_csv(read_file(opt.samples_path));
  Tensor result;
  if (opt.as_cov4) {
    if (samples.kind() != SampleKind::matrix || !opt.central || opt.k != 2) {
      throw UsageError("--as-cov4 needs matrix samples, --central and -k 2");
    }
    result = matrix_covariance_tensor(samples);
  } else if (samples.kind() == SampleKind::matrix) {
    result = opt.central ? sample_matrix_central_moment(samples, opt.k) : sample_matrix_raw_moment(samples, opt.k);
  } else {
    result = opt.central ? sample_central_moment(samples, opt.k) : sample_raw_moment(samples, opt.k);
  }
  emit(opt, encode(result, opt.format), out);
  return kOk;
}

int cmd_sample(const Options& opt, std::ostream& out) {
  if (!opt.format.empty() && opt.format != "csv") throw UsageError("samples are written as --format csv only");
  const GaussianParams params = gaussian_params_from_json(read_file(opt.params_path));
  const SampleSet samples = std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GaussianVectorParams>) {
          return sample_gaussian_vector(p, opt.count, opt.seed);
        } else {
          return sample_gaussian_matrix(p, opt.count, opt.seed);
        }
      },
      params);
  emit(opt, samples_to_csv(samples), out);
  return kOk;
}

int cmd_compare(const Options& opt, std::ostream& out, std::ostream& err) {
  const GaussianVectorParams params = load_vector_params(opt.params_path);
  const Tensor expected = gaussian_moment(params, opt.k);
  if (opt.count < 2) {
    err << "momtensor: insufficient samples: standard errors need -N >= 2, got " << opt.count << "\n";
    return kCompareFailed;
  }
  const SampleSet samples = sample_gaussian_vector(params, opt.count, opt.seed);
  const MomentEstimate est = sample_raw_moment_with_error(samples, opt.k);

  const double scale = std::max(1.0, max_abs(expected));
  double max_dev = 0.0;
  double max_multiple = 0.0;
  bool pass = true;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double dev = std::abs(est.value.data()[i] - expected.data()[i]);
    const double se = est.standard_error.data()[i];
    max_dev = std::max(max_dev, dev);
    if (se > 0.0) {
      max_multiple = std::max(max_multiple, dev / se);
      if (dev > opt.tol * se) pass = false;
    } else if (dev > 1e-12 * scale) {
      // Degenerate entry: no sampling noise, so only rounding may differ.
      pass = false;
    }
  }
  out << "k " << opt.k << "\n"
      << "samples " << opt.count << "\n"
      << "entries " << expected.size() << "\n"
      << "max_abs_deviation " << format_double(max_dev) << "\n"
      << "max_se_multiple " << format_double(max_multiple) << "\n"
      << "tolerance " << format_double(opt.tol) << "\n"
      << "result " << (pass ? "pass" : "fail") << "\n";
  return pass ? kOk : kCompareFailed;
}

int cmd_partitions(const Options& opt, std::ostream& out) {
  std::string body;
  std::uint64_t count = 0;
  if (opt.has_s) {
    if (2 * opt.s > opt.k) throw UsageError("-s must satisfy 2s <= k");
    if (__builtin_mul_overflow(binomial(opt.k, 2 * opt.s), double_factorial(static_cast<int>(2 * opt.s) - 1),
                               &count)) {
      throw GuardError("partition count overflows 64 bits");
    }
    if (opt.list) {
      for (const auto& gamma : s2_partitions(opt.k, opt.s)) body += (body.empty() ? "" : ",") + to_json(gamma);
    }
  } else {
    if (opt.k % 2 != 0) throw UsageError("odd k has no perfect matchings; pass -s for [s,2]-partitions");
    count = double_factorial(static_cast<int>(opt.k) - 1);
    if (opt.list) {
      for (const auto& gamma : two_partitions(opt.k)) body += (body.empty() ? "" : ",") + to_json(gamma);
    }
  }
  std::string text = "{\"k\":" + std::to_string(opt.k);
  if (opt.has_s) text += ",\"s\":" + std::to_string(opt.s);
  text += ",\"count\":" + std::to_string(count);
  if (opt.list) text += ",\"partitions\":[" + body + "]";
  text += "}\n";
  emit(opt, text, out);
  return kOk;
}

std::string limits_footer() {
  return "Limits: tensors hold at most " + std::to_string(entry_limit()) +
         " entries (MOMENT_TENSORS_MAX_ENTRIES may lower this); moment order k <= " +
         std::to_string(kMaxMomentOrder) + "; enumerations hold at most " + std::to_string(kMaxEnumeration) +
         " partitions (perfect matchings need k <= " + std::to_string(kMaxMatchingOrder) +
         ").\nExit codes: 0 ok, 1 comparison failed, 2 usage or input error, 3 invalid parameters, "
         "4 shape or guard error.";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Tensor moments of Gaussian vectors and matrices", "momtensor"};
  app.footer(limits_footer());
  app.require_subcommand(1);

  const auto formats = CLI::IsMember({"json", "binary", "csv"});
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", opt.out_path, "Output file (default stdout)"); };
  auto add_format = [&](CLI::App* sub, const char* help) {
    sub->add_option("--format", opt.format, help)->check(formats);
  };

  auto* snd = app.add_subcommand("snd-moment", "Moment tensor E[u^k] of a standard normal vector");
  snd->add_option("-n", opt.n, "Dimension")->required()->check(CLI::PositiveNumber);
  snd->add_option("-k", opt.k, "Order")->required()->check(CLI::PositiveNumber);
  add_format(snd, "json (default) or binary");
  add_out(snd);

  auto* gauss = app.add_subcommand("gauss-moment", "Raw moment tensor E[x^k] of x ~ N(mu, Sigma)");
  gauss->add_option("--params", opt.params_path, "JSON {\"mean\": [...], \"cov\": [[...]]}")
      ->required()
      ->check(CLI::ExistingFile);
  gauss->add_option("-k", opt.k, "Order")->required()->check(CLI::PositiveNumber);
  add_format(gauss, "json (default) or binary");
  add_out(gauss);

  auto* estimate = app.add_subcommand("estimate", "Sample moment tensor from a CSV sample file");
  estimate->add_option("samples", opt.samples_path, "Sample CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("-k", opt.k, "Order")->required()->check(CLI::PositiveNumber);
  estimate->add_flag("--central", opt.central, "Center at the sample mean");
  estimate->add_flag("--as-cov4", opt.as_cov4, "Matrix samples: m x m x n x n covariance tensor (needs --central -k 2)");
  add_format(estimate, "json (default) or binary");
  add_out(estimate);

  auto* sample = app.add_subcommand("sample", "Draw Gaussian vectors or matrices to CSV");
  sample->add_option("--params", opt.params_path, "Vector or matrix parameter JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("-N,--count", opt.count, "Number of samples")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  add_format(sample, "csv (default)");
  add_out(sample);

  auto* compare = app.add_subcommand("compare", "Check Monte Carlo moments against the closed form");
  compare->add_option("--params", opt.params_path, "Vector parameter JSON")->required()->check(CLI::ExistingFile);
  compare->add_option("-k", opt.k, "Order")->required()->check(CLI::PositiveNumber);
  compare->add_option("-N,--count", opt.count, "Number of samples")->required()->check(CLI::PositiveNumber);
  compare->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  compare->add_option("--tol", opt.tol, "Allowed deviation in standard errors")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* parts = app.add_subcommand("partitions", "Count or list perfect matchings and [s,2]-partitions");
  parts->add_option("-k", opt.k, "Ground set size")->required()->check(CLI::PositiveNumber);
  auto* s_opt = parts->add_option("-s", opt.s, "Number of pairs");
  parts->add_flag("--list", opt.list, "Print every partition (1-based)");
  add_out(parts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  opt.has_s = s_opt->count() > 0;

  try {
    if (*snd) return cmd_snd_moment(opt, out);
    if (*gauss) return cmd_gauss_moment(opt, out);
    if (*estimate) return cmd_estimate(opt, out);
    if (*sample) return cmd_sample(opt, out);
    if (*compare) return cmd_compare(opt, out, err);
    if (*parts) return cmd_partitions(opt, out);
  } catch (const UsageError& e) {
    err << "momtensor: error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "momtensor: invalid parameters: " << e.what() << "\n";
    return kBadParameters;
  } catch (const ShapeError& e) {
    err << "momtensor: shape error: " << e.what() << "\n";
    return kShapeOrGuard;
  } catch (const GuardError& e) {
    err << "momtensor: limit exceeded: " << e.what() << "\n";
    return kShapeOrGuard;
  } catch (const std::exception& e) {
    err << "momtensor: error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace momtensor::cli
