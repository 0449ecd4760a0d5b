#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbf/bench_record.hpp"
#include "sbf/bilateral.hpp"
#include "sbf/kernels.hpp"
#include "sbf/maxfilter.hpp"
#include "sbf/metrics.hpp"
#include "sbf/nlm.hpp"
#include "sbf/pgm.hpp"

namespace sbf::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename F>
double time_millis(F&& f) {
  const auto start = Clock::now();
  f();
  return millis_since(start);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SpatialMode spatial_mode(const std::string& name, double sigma_s, int radius) {
  if (name == "box") return Box{radius >= 0 ? radius : static_cast<int>(std::ceil(sigma_s))};
  return IteratedBox{sigma_s, 3};
}

Image scaled(const Image& img, double factor) {
  Image out = img;
  for (double& v : out.samples()) v *= factor;
  return out;
}

// ---------------------------------------------------------------- filter

struct FilterOptions {
  std::string input, output, float_out;
  double sigma_s = 3.0;
  double sigma_r = 30.0;
  double epsilon = 0.01;
  std::string kernel = "cosine";
  std::string spatial = "gauss";
  int radius = -1;
  std::string method = "shiftable";
  std::optional<double> fixed_t;
  bool csv = false;
  bool compare_direct = false;
  bool ascii = false;
};

int run_filter(const FilterOptions& o, std::ostream& out) {
  const PgmImage in = load_pgm(o.input);
  const SpatialMode mode = spatial_mode(o.spatial, o.sigma_s, o.radius);
  const bool poly = o.kernel == "poly";
  // The polynomial family works on [0, 1] samples.
  const double scale = poly ? 1.0 / in.maxval : 1.0;

  FilterParams params;
  params.sigma_r = o.sigma_r * scale;
  params.epsilon = o.epsilon;
  params.spatial = mode;
  params.family = poly ? KernelFamily::Polynomial : KernelFamily::RaisedCosine;
  if (o.spatial == "gauss" && o.radius >= 0) params.window_radius = o.radius;
  if (o.fixed_t) params.fixed_T = *o.fixed_t * scale;

  const auto gaussian = [sr = o.sigma_r](double s) { return eval_gaussian(s, sr); };

  BenchRecord rec;
  rec.method = o.method + (o.method == "shiftable" ? "-" + o.kernel : "");
  rec.sigma_s = o.sigma_s;
  rec.sigma_r = o.sigma_r;
  rec.epsilon = o.epsilon;

  Image result;
  if (o.method == "direct") {
    rec.wall_millis = time_millis([&] { result = direct_bf(in.image, mode, gaussian); });
    rec.T = o.fixed_t ? *o.fixed_t : compute_T(in.image, default_window_radius(params));
    rec.N = 0;
    rec.M = 0;
    rec.retained_terms = 1;
  } else {
    const Image work = scaled(in.image, scale);
    FilterResult fr;
    rec.wall_millis = time_millis([&] { fr = shiftable_bf(work, params); });
    result = scaled(fr.image, 1.0 / scale);
    rec.T = fr.plan.T / scale;
    rec.N = fr.plan.order;
    rec.M = fr.plan.truncation;
    rec.retained_terms = fr.plan.retained_terms();
  }
  if (o.compare_direct) {
    const Image reference = o.method == "direct" ? result : direct_bf(in.image, mode, gaussian);
    rec.mse_vs_direct = compute_metrics(result, reference).mse;
  }

  if (!o.output.empty())
    save_pgm(result, o.output, in.maxval, o.ascii ? PgmFormat::Ascii : PgmFormat::Binary);
  if (!o.float_out.empty()) save_raw_f64(result, o.float_out);

  if (o.csv)
    out << bench_csv_header() << '\n' << to_csv_row(rec) << '\n';
  else
    out << to_human(rec) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- compute-t

int run_compute_t(const std::string& input, int radius, std::ostream& out) {
  const PgmImage in = load_pgm(input);
  double T = 0.0;
  const double ms = time_millis([&] { T = compute_T(in.image, radius); });
  out << "T=" << T << " wall_millis=" << ms << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- tables

int run_tables(const std::string& which, double T, double epsilon, std::ostream& out) {
  if (which == "n0") {
    out << "sigma_r,N0\n";
    for (double s : {5.0, 10.0, 20.0, 30.0, 40.0, 60.0, 80.0, 100.0})
      out << s << ',' << order_threshold(T, s, KernelFamily::RaisedCosine, ThresholdMode::Round)
          << '\n';
    return kExitOk;
  }
  out << "sigma_r,N_before,N_after,percent_dropped\n";
  for (double s : {3.0, 5.0, 8.0, 10.0, 12.0, 15.0}) {
    const KernelPlan plan = select_plan(T, s, epsilon, KernelFamily::RaisedCosine);
    const int before = plan.order + 1;
    const int after = plan.retained_terms();
    const double dropped = 100.0 * (before - after) / before;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%g,%d,%d,%.0f\n", s, plan.order, after, dropped);
    out << buf;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- bench

struct BenchOptions {
  std::string input;
  std::vector<double> sigma_s{15.0};
  std::vector<double> sigma_r{5.0, 8.0, 10.0, 12.0, 15.0, 20.0};
  std::optional<double> epsilon;
  std::string spatial = "gauss";
  int repeats = 5;
  bool with_direct = false;
  bool untruncated = false;
  std::optional<double> fixed_t;
};

int run_bench(const BenchOptions& o, std::ostream& out) {
  const Image img = o.input.empty() ? make_checker(256, 256, 32) : load_pgm(o.input).image;
  out << bench_csv_header() << '\n';
  for (double ss : o.sigma_s) {
    const SpatialMode mode = spatial_mode(o.spatial, ss, -1);
    std::optional<Image> reference;
    for (double sr : o.sigma_r) {
      const double scheduled = o.epsilon ? *o.epsilon : scheduled_epsilon(sr);
      std::vector<double> tolerances{scheduled};
      if (o.untruncated && scheduled != 0.0) tolerances.push_back(0.0);
      if (o.with_direct)
        reference = direct_bf(img, mode, [sr](double s) { return eval_gaussian(s, sr); });
      for (double eps : tolerances) {
        FilterParams params;
        params.sigma_r = sr;
        params.epsilon = eps;
        params.spatial = mode;
        params.fixed_T = o.fixed_t;
        std::vector<double> times;
        FilterResult fr;
        for (int i = 0; i < o.repeats; ++i)
          times.push_back(time_millis([&] { fr = shiftable_bf(img, params); }));
        BenchRecord rec;
        rec.method = eps == 0.0 ? "shiftable-untruncated" : "shiftable";
        rec.sigma_s = ss;
        rec.sigma_r = sr;
        rec.epsilon = eps;
        rec.T = fr.plan.T;
        rec.N = fr.plan.order;
        rec.M = fr.plan.truncation;
        rec.retained_terms = fr.plan.retained_terms();
        rec.wall_millis = median(times);
        if (reference) rec.mse_vs_direct = compute_metrics(fr.image, *reference).mse;
        out << to_csv_row(rec) << '\n';
      }
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------- nlm

struct NlmOptions {
  std::string input, output, float_out;
  std::string offsets = "0,0";
  std::string sigmas = "30";
  std::string spatial = "box";
  double sigma_s = 2.0;
  int radius = -1;
  double epsilon = 0.0;
  std::size_t max_terms = 10000;
  std::optional<double> fixed_t;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_number(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

PatchSpec parse_patch(const std::string& offsets, const std::string& sigmas) {
  PatchSpec patch;
  patch.offsets.clear();
  patch.sigmas.clear();
  for (const auto& pair : split(offsets, ';')) {
    const auto xy = split(pair, ',');
    if (xy.size() != 2) throw UsageError("offsets must look like 'dx,dy;dx,dy', got '" + pair + "'");
    const double dx = to_number(xy[0], "offset"), dy = to_number(xy[1], "offset");
    if (dx != std::floor(dx) || dy != std::floor(dy))
      throw UsageError("offsets must be integers");
    patch.offsets.push_back({static_cast<int>(dx), static_cast<int>(dy)});
  }
  for (const auto& s : split(sigmas, ',')) patch.sigmas.push_back(to_number(s, "sigma"));
  try {
    validate(patch);
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  return patch;
}

int run_nlm(const NlmOptions& o, std::ostream& out) {
  NlmParams params;
  params.patch = parse_patch(o.offsets, o.sigmas);
  const PgmImage in = load_pgm(o.input);
  params.spatial = spatial_mode(o.spatial, o.sigma_s, o.radius);
  if (o.spatial == "gauss" && o.radius >= 0) params.window_radius = o.radius;
  params.epsilon = o.epsilon;
  params.max_terms = o.max_terms;
  params.fixed_T = o.fixed_t;

  NlmResult res;
  const double ms = time_millis([&] { res = coarse_nlm_shiftable(in.image, params); });
  if (!o.output.empty()) save_pgm(res.image, o.output, in.maxval);
  if (!o.float_out.empty()) save_raw_f64(res.image, o.float_out);
  out << "nlm: components=" << res.plans.size() << " T=" << res.plans.front().T
      << " terms=" << res.terms;
  for (const auto& plan : res.plans)
    out << " [N=" << plan.order << " M=" << plan.truncation << "]";
  out << " time=" << ms << " ms\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-time bilateral filtering with shiftable range kernels"};
  app.require_subcommand(1);
  std::function<int()> action;

  FilterOptions fo;
  auto* filter = app.add_subcommand("filter", "Bilateral-filter a PGM image");
  filter->add_option("--input", fo.input, "Input PGM")->required()->check(CLI::ExistingFile);
  filter->add_option("--output", fo.output, "Output PGM (same depth as input)");
  filter->add_option("--float-out", fo.float_out, "Raw little-endian float64 output");
  filter->add_option("--sigma-s", fo.sigma_s, "Spatial sigma (pixels)")->check(CLI::PositiveNumber);
  filter->add_option("--sigma-r", fo.sigma_r, "Range sigma (intensity)")->required()->check(CLI::PositiveNumber);
  filter->add_option("--epsilon", fo.epsilon, "Truncation tolerance, fraction of peak")->check(CLI::Range(0.0, 0.999999));
  filter->add_option("--kernel", fo.kernel, "Range kernel family")->check(CLI::IsMember({"cosine", "poly"}));
  filter->add_option("--spatial", fo.spatial, "Spatial filter")->check(CLI::IsMember({"box", "gauss"}));
  filter->add_option("--radius", fo.radius, "Box radius, or T window radius for gauss")->check(CLI::NonNegativeNumber);
  filter->add_option("--method", fo.method, "Algorithm")->check(CLI::IsMember({"shiftable", "direct"}));
  filter->add_option("--fixed-t", fo.fixed_t, "Use this T instead of measuring it")->check(CLI::NonNegativeNumber);
  filter->add_flag("--csv", fo.csv, "Print the record as CSV");
  filter->add_flag("--compare-direct", fo.compare_direct, "Also report MSE against the direct filter");
  filter->add_flag("--ascii", fo.ascii, "Write P2 instead of P5");
  filter->callback([&] { action = [&] { return run_filter(fo, out); }; });

  std::string ct_input;
  int ct_radius = 0;
  auto* ct = app.add_subcommand("compute-t", "Measure the local dynamic range T");
  ct->add_option("--input", ct_input, "Input PGM")->required()->check(CLI::ExistingFile);
  ct->add_option("--radius", ct_radius, "Window radius")->required()->check(CLI::NonNegativeNumber);
  ct->callback([&] { action = [&] { return run_compute_t(ct_input, ct_radius, out); }; });

  std::string which = "n0";
  double table_t = 255.0, table_eps = 0.05;
  auto* tables = app.add_subcommand("tables", "Print kernel order tables");
  tables->add_option("--which", which, "Table to print")->check(CLI::IsMember({"n0", "truncation"}));
  tables->add_option("--t", table_t, "Dynamic range T")->check(CLI::NonNegativeNumber);
  tables->add_option("--epsilon", table_eps, "Tolerance for the truncation table")->check(CLI::Range(0.0, 0.999999));
  tables->callback([&] { action = [&] { return run_tables(which, table_t, table_eps, out); }; });

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Time the filter over a parameter grid, CSV output");
  bench->add_option("--input", bo.input, "Input PGM (default: 256x256 checker)")->check(CLI::ExistingFile);
  bench->add_option("--sigma-s", bo.sigma_s, "Spatial sigmas")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--sigma-r", bo.sigma_r, "Range sigmas")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--epsilon", bo.epsilon, "Fixed tolerance (default: per-sigma_r schedule)")->check(CLI::Range(0.0, 0.999999));
  bench->add_option("--spatial", bo.spatial, "Spatial filter")->check(CLI::IsMember({"box", "gauss"}));
  bench->add_option("--repeats", bo.repeats, "Runs per configuration (median reported)")->check(CLI::PositiveNumber);
  bench->add_option("--fixed-t", bo.fixed_t, "Use this T instead of measuring it")->check(CLI::NonNegativeNumber);
  bench->add_flag("--with-direct", bo.with_direct, "Fill mse_vs_direct using the direct filter");
  bench->add_flag("--untruncated", bo.untruncated, "Add an epsilon = 0 row per configuration");
  bench->callback([&] { action = [&] { return run_bench(bo, out); }; });

  NlmOptions no;
  auto* nlm = app.add_subcommand("nlm", "Coarse non-local means over a few patch offsets");
  nlm->add_option("--input", no.input, "Input PGM")->required()->check(CLI::ExistingFile);
  nlm->add_option("--output", no.output, "Output PGM");
  nlm->add_option("--float-out", no.float_out, "Raw little-endian float64 output");
  nlm->add_option("--offsets", no.offsets, "Patch offsets 'dx,dy;dx,dy', first must be 0,0");
  nlm->add_option("--sigmas", no.sigmas, "Range sigma per offset, comma separated");
  nlm->add_option("--spatial", no.spatial, "Spatial filter")->check(CLI::IsMember({"box", "gauss"}));
  nlm->add_option("--sigma-s", no.sigma_s, "Spatial sigma")->check(CLI::PositiveNumber);
  nlm->add_option("--radius", no.radius, "Box radius, or T window radius for gauss")->check(CLI::NonNegativeNumber);
  nlm->add_option("--epsilon", no.epsilon, "Truncation tolerance")->check(CLI::Range(0.0, 0.999999));
  nlm->add_option("--max-terms", no.max_terms, "Multi-index term budget")->check(CLI::PositiveNumber);
  nlm->add_option("--fixed-t", no.fixed_t, "Use this T instead of measuring it")->check(CLI::NonNegativeNumber);
  nlm->callback([&] { action = [&] { return run_nlm(no, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UnsupportedOrder& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace sbf::cli
