// binexp: command-line front end.
//
//   binexp expand 2/3 -n 6
//   binexp dims alpha --M 3
//   binexp schedule --builtin quadratic --mu 2 --n-max 10000 --output profile.csv
//   binexp sample --measure nuB --M 2 --depth 40 --count 100000 --seed 7 --output samples.csv
//   binexp estimate --family B --M 3 --count 100000 --output report.json --svg fit.svg
//   binexp localdim --measure nubar --M 2 --mu 2 --n 10000 --output ratios.csv
//
// Relative --output and --svg paths are placed under $BINEXP_OUTPUT_DIR when it is set.

#include "binexp/binexp.hpp"

#include "CLI11.hpp"
#include "svg_plot.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

using namespace binexp;
namespace fs = std::filesystem;

constexpr const char *kErrorPrefix = "binexp: error: ";

fs::path resolve_output(const std::string &path) {
    fs::path p(path);
    if (p.is_relative()) {
        if (const char *dir = std::getenv("BINEXP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            p = fs::path(dir) / p;
        }
    }
    return p;
}

// Writes to the file when a path is given, otherwise to stdout.
void emit(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    const fs::path p = resolve_output(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + p.string() + "' for writing");
    }
    out << content;
    if (!out.flush()) {
        throw std::runtime_error("failed writing '" + p.string() + "'");
    }
}

void note_written(const std::string &path, const std::string &what) {
    if (!path.empty() && path != "-") {
        std::cout << "wrote " << what << " to " << resolve_output(path).string() << '\n';
    }
}

struct ScheduleFlags {
    std::string builtin;
    std::string file;
    unsigned mu = 1;
    std::uint64_t period = 2;
    unsigned value = 1;
};

void add_schedule_flags(CLI::App *cmd, ScheduleFlags &f, const std::string &builtin_flag) {
    cmd->add_option(builtin_flag, f.builtin, "Built-in schedule")
        ->check(CLI::IsMember({"powers-of-two", "quadratic", "constant"}));
    cmd->add_option("--schedule-file", f.file, "Schedule file with lines \"index digit\"")->check(CLI::ExistingFile);
    cmd->add_option("--period", f.period, "Period of the constant schedule")->capture_default_str();
    cmd->add_option("--value", f.value, "Forced digit of the constant schedule")->capture_default_str();
}

std::optional<IndexSchedule> make_schedule(const ScheduleFlags &f, unsigned quadratic_mu) {
    if (!f.file.empty() && !f.builtin.empty()) {
        throw std::invalid_argument("give either a built-in schedule or --schedule-file, not both");
    }
    if (!f.file.empty()) {
        return IndexSchedule::load(f.file);
    }
    if (f.builtin == "powers-of-two") {
        return IndexSchedule::powers_of_two();
    }
    if (f.builtin == "quadratic") {
        return IndexSchedule::quadratic(quadratic_mu);
    }
    if (f.builtin == "constant") {
        return IndexSchedule::constant(f.period, f.value);
    }
    return std::nullopt;
}

unsigned integer_mu(double mu) {
    if (mu < 1.0 || mu != std::floor(mu) || mu > 1e6) {
        throw std::invalid_argument("the quadratic schedule needs an integer mu >= 1");
    }
    return static_cast<unsigned>(mu);
}

struct MeasureFlags {
    std::string measure = "nuB";
    int M = 2;
    double mu = 1.0;
    ScheduleFlags schedule;
};

void add_measure_flags(CLI::App *cmd, MeasureFlags &f) {
    cmd->add_option("--measure", f.measure, "lebesgue, nuA, nuB, nuhat or nubar")
        ->check(CLI::IsMember({"lebesgue", "nuA", "nuB", "nuhat", "nubar", "nu_A", "nu_B", "nu_hat", "nu_bar"}))
        ->capture_default_str();
    cmd->add_option("--M", f.M, "Digit bound M")->capture_default_str();
    cmd->add_option("--mu", f.mu, "mu(I,f) of nubar")->capture_default_str();
    add_schedule_flags(cmd, f.schedule, "--schedule");
}

MeasureSpec make_measure(const MeasureFlags &f) {
    std::string name = f.measure;
    std::erase(name, '_');
    if (name == "lebesgue") {
        return MeasureSpec::lebesgue();
    }
    if (name == "nuA") {
        return MeasureSpec::nu_A(f.M);
    }
    if (name == "nuB") {
        return MeasureSpec::nu_B(f.M);
    }
    if (name == "nuhat") {
        auto s = make_schedule(f.schedule, 1);
        if (s && s->analytic_mu() && *s->analytic_mu() != 0.0) {
            throw std::invalid_argument("nuhat needs a schedule with mu(I,f) = 0; use nubar for " + s->descriptor());
        }
        return MeasureSpec::nu_hat(f.M, s ? std::move(*s) : IndexSchedule::powers_of_two());
    }
    auto s = make_schedule(f.schedule, f.schedule.builtin == "quadratic" ? integer_mu(f.mu) : 1);
    return MeasureSpec::nu_bar(f.M, f.mu, s ? std::move(*s) : IndexSchedule::quadratic(integer_mu(f.mu)));
}

std::string fmt(double x) { return format_real(x); }

// ---- subcommands ----

struct ExpandArgs {
    std::string x;
    std::size_t n = 10;
    unsigned precision = 64;
    std::string format = "text";
    std::string output;
};

void run_expand(const ExpandArgs &a) {
    const ExactReal x = ExactReal::parse(a.x, a.precision);
    if (a.n < 1) {
        throw std::invalid_argument("n must be >= 1");
    }
    const DigitPrefix digits = digit_prefix(x, a.n);
    const ExactReal value = prefix_value(digits);
    const CylinderInterval c = cylinder(digits);
    const std::uint64_t S = digits.digit_sum();
    std::ostringstream out;
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["x"] = x.str();
        j["n"] = a.n;
        j["digits"] = std::vector<Digit>(digits.begin(), digits.end());
        j["digit_sum"] = S;
        j["prefix_value"] = value.str();
        j["cylinder"] = {c.left.to_exact().str(), c.right().to_exact().str()};
        j["residual_bound"] = "2^-" + std::to_string(S);
        out << j.dump(2) << '\n';
    } else {
        out << "x: " << x.str() << '\n';
        out << "digits: " << digits.str() << '\n';
        out << "digit_sum: " << S << '\n';
        out << "prefix_value: " << value.str() << '\n';
        out << "cylinder: (" << c.left.to_exact().str() << ", " << c.right().to_exact().str() << "]\n";
        out << "residual_bound: 0 < x - prefix_value <= 2^-" << S << '\n';
    }
    emit(a.output, out.str());
}

struct DimsArgs {
    std::string family;
    int M = 2;
    double mu = 0.0;
    double tol = kDefaultTolerance;
    std::string format = "text";
    std::string output;
};

void run_dims(const DimsArgs &a) {
    std::string family = a.family;
    std::replace(family.begin(), family.end(), '-', '_');
    DimValue d;
    if (family == "alpha") {
        d = alpha(a.M, a.tol);
    } else if (family == "beta") {
        d = beta(a.M, a.tol);
    } else if (family == "gamma_M" || family == "gamma_m" || family == "gamma") {
        d = gamma_M(a.mu, a.M, a.tol);
    } else if (family == "gamma_limit") {
        d = gamma_limit(a.mu, a.tol);
    } else {
        throw std::invalid_argument("unknown family '" + a.family + "' (expected alpha, beta, gamma-M or gamma-limit)");
    }
    std::ostringstream out;
    if (a.format == "json") {
        out << to_json(d).dump(2) << '\n';
    } else {
        out << "family: " << to_string(d.family) << '\n';
        if (d.family != Family::gamma_limit) {
            out << "M: " << d.M << '\n';
        }
        if (d.family == Family::gamma_M || d.family == Family::gamma_limit) {
            out << "mu: " << fmt(d.mu) << '\n';
        }
        out << "root: " << fmt(d.root) << '\n';
        out << "value: " << fmt(d.value) << '\n';
        out << "bracket: [" << fmt(d.lo) << ", " << fmt(d.hi) << "]\n";
        out << "residual: " << fmt(residual(d)) << '\n';
    }
    emit(a.output, out.str());
}

struct ScheduleArgs {
    ScheduleFlags schedule;
    unsigned mu = 1;
    std::uint64_t n_max = 10000;
    std::string output;
    std::string svg;
};

void run_schedule(const ScheduleArgs &a) {
    const auto s = make_schedule(a.schedule, a.mu);
    if (!s) {
        throw std::invalid_argument("choose a schedule with --builtin or --schedule-file");
    }
    const auto profile = mu_profile(*s, a.n_max);
    std::ostringstream csv;
    write_schedule_csv(csv, profile);
    emit(a.output, csv.str());
    if (!a.svg.empty()) {
        svg::Chart chart{"lambda_n / n for " + s->descriptor(), "n", "lambda_n / n", {}};
        svg::Series ratio{"lambda_n / n", {}, {}, "#1f77b4", false};
        for (const auto &row : profile.rows) {
            ratio.x.push_back(static_cast<double>(row.n));
            ratio.y.push_back(row.ratio);
        }
        chart.series.push_back(std::move(ratio));
        const double mu = s->analytic_mu().value_or(profile.estimate);
        chart.series.push_back(svg::Series{s->analytic_mu() ? "mu (analytic)" : "tail-window estimate",
                                           {1.0, static_cast<double>(a.n_max)},
                                           {mu, mu},
                                           "#d62728",
                                           false});
        std::ostringstream out;
        svg::write(out, chart);
        emit(a.svg, out.str());
    }
    if (!a.output.empty() && a.output != "-") {
        std::cout << "schedule: " << s->descriptor() << '\n';
        std::cout << "mu_estimate: " << fmt(profile.estimate) << " (sup of lambda_n/n over n in [" << (a.n_max + 1) / 2
                  << ", " << a.n_max << "])\n";
        if (s->analytic_mu()) {
            std::cout << "mu_analytic: " << fmt(*s->analytic_mu()) << '\n';
        }
        note_written(a.output, std::to_string(profile.rows.size()) + " rows");
        note_written(a.svg, "plot");
    }
}

struct SampleArgs {
    MeasureFlags measure;
    std::size_t depth = 40;
    std::size_t count = 1000;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    std::string format = "csv";
    std::string output;
};

void run_sample(const SampleArgs &a) {
    const MeasureSpec spec = make_measure(a.measure);
    const auto records = draw(spec, a.depth, a.count, a.seed, SamplerOptions{a.threads});
    std::ostringstream out;
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["measure"] = spec.describe();
        j["depth"] = a.depth;
        j["seed"] = a.seed;
        auto &rows = j["samples"] = nlohmann::ordered_json::array();
        for (const auto &r : records) {
            nlohmann::ordered_json row;
            row["digits"] = std::vector<Digit>(r.digits.begin(), r.digits.end());
            row["value"] = r.value.str();
            row["midpoint"] = r.midpoint;
            row["log2_mass"] = r.log2_mass;
            rows.push_back(std::move(row));
        }
        out << j.dump(2) << '\n';
    } else {
        write_samples_csv(out, records);
    }
    emit(a.output, out.str());
    note_written(a.output, std::to_string(records.size()) + " samples of " + spec.describe());
}

struct EstimateArgs {
    std::string family = "B";
    int M = 2;
    double mu = 1.0;
    ScheduleFlags schedule;
    std::size_t count = 100000;
    std::size_t depth = 60;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    int k_min = 0;
    int k_max = 0;
    std::string format = "json";
    std::string output;
    std::string svg;
};

void run_estimate(const EstimateArgs &a) {
    ReportRequest req;
    req.family = parse_family(a.family);
    req.M = a.M;
    req.mu = a.mu;
    req.count = a.count;
    req.depth = a.depth;
    req.seed = a.seed;
    req.threads = a.threads;
    if (a.k_min != 0 || a.k_max != 0) {
        if (a.k_min == 0 || a.k_max == 0) {
            throw std::invalid_argument("give both --k-min and --k-max");
        }
        req.scales = ScaleRange{a.k_min, a.k_max};
    }
    req.schedule = make_schedule(a.schedule, a.schedule.builtin == "quadratic" ? integer_mu(a.mu) : 1);
    if (req.family != SetFamily::B_hat && req.family != SetFamily::B_bar && req.schedule) {
        throw std::invalid_argument("schedules apply only to the B_hat and B_bar families");
    }
    const DimensionReport r = dimension_report(req);
    std::ostringstream out;
    if (a.format == "csv") {
        out << "k,N_k,log2_N_k\n";
        for (std::size_t i = 0; i < r.boxes.scales.size(); ++i) {
            out << r.boxes.scales[i] << ',' << r.boxes.counts[i] << ','
                << fmt(std::log2(static_cast<double>(r.boxes.counts[i]))) << '\n';
        }
    } else {
        out << to_json(r).dump(2) << '\n';
    }
    emit(a.output, out.str());
    if (r.boxes.saturated) {
        std::cerr << "binexp: warning: N_k at k_max exceeds count/10; the fit range is saturated\n";
    }
    if (!a.svg.empty()) {
        svg::Chart chart{"box counting, " + to_string(r.family) + " (" + r.measure + ")", "k (box size 2^-k)",
                         "log2 N_k", {}};
        svg::Series pts{"log2 N_k", {}, {}, "#1f77b4", true};
        svg::Series fit{"fit, slope " + fmt(r.raw_slope), {}, {}, "#d62728", false};
        for (std::size_t i = 0; i < r.boxes.scales.size(); ++i) {
            const double k = r.boxes.scales[i];
            pts.x.push_back(k);
            pts.y.push_back(std::log2(static_cast<double>(r.boxes.counts[i])));
            fit.x.push_back(k);
            fit.y.push_back(r.boxes.intercept + r.raw_slope * k);
        }
        chart.series.push_back(std::move(pts));
        chart.series.push_back(std::move(fit));
        std::ostringstream plot;
        svg::write(plot, chart);
        emit(a.svg, plot.str());
    }
    if (!a.output.empty() && a.output != "-") {
        std::cout << "D_theory: " << fmt(r.D_theory) << '\n';
        std::cout << "D_empirical: " << fmt(r.D_empirical) << '\n';
        std::cout << "delta: " << fmt(r.delta) << '\n';
        note_written(a.output, "report");
        note_written(a.svg, "plot");
    }
}

struct LocalDimArgs {
    MeasureFlags measure;
    std::uint64_t n = 10000;
    std::uint64_t stride = 1;
    std::uint64_t seed = kDefaultSeed;
    std::string output;
};

void run_localdim(const LocalDimArgs &a) {
    const MeasureSpec spec = make_measure(a.measure);
    if (a.n < 1 || a.stride < 1) {
        throw std::invalid_argument("--n and --stride must be >= 1");
    }
    const std::size_t depth = depth_for_free_digits(spec, a.n);
    const auto record = draw(spec, depth, 1, a.seed, SamplerOptions{1}).front();
    const auto seq = local_dimension(record, spec);
    std::ostringstream out;
    write_local_dimension_csv(out, seq, a.stride);
    emit(a.output, out.str());
    if (!a.output.empty() && a.output != "-") {
        std::cout << "measure: " << spec.describe() << '\n';
        std::cout << "D: " << fmt(spec.dimension()) << '\n';
        std::cout << "ratio_at_n: " << fmt(seq.limit_estimate) << '\n';
        note_written(a.output, std::to_string(seq.n.size()) + " ratios");
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Digit expansions x = sum 2^-(d_1+...+d_i): exact digits, closed-form dimensions, "
                 "schedules, sampling and dimension estimates"};
    app.name("binexp");
    app.require_subcommand(1);

    ExpandArgs expand;
    auto *cmd_expand = app.add_subcommand("expand", "Digits, prefix value and cylinder of x in (0,1]");
    cmd_expand->add_option("x", expand.x, "p/q, an integer, or a decimal")->required();
    cmd_expand->add_option("-n", expand.n, "Number of digits")->capture_default_str();
    cmd_expand->add_option("--precision", expand.precision, "Bits for decimal to dyadic conversion")
        ->check(CLI::Range(1u, 100000u))
        ->capture_default_str();
    cmd_expand->add_option("--format", expand.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    cmd_expand->add_option("--output", expand.output, "Output file (default stdout)");

    DimsArgs dims;
    auto *cmd_dims = app.add_subcommand("dims", "Closed-form dimension: alpha, beta, gamma-M or gamma-limit");
    cmd_dims->add_option("family", dims.family)->required();
    cmd_dims->add_option("--M", dims.M)->capture_default_str();
    cmd_dims->add_option("--mu", dims.mu)->capture_default_str();
    cmd_dims->add_option("--tol", dims.tol, "Root tolerance")->capture_default_str();
    cmd_dims->add_option("--format", dims.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    cmd_dims->add_option("--output", dims.output, "Output file (default stdout)");

    ScheduleArgs sched;
    auto *cmd_schedule = app.add_subcommand("schedule", "Profile n, k(n), lambda_n, lambda_n/n of a schedule");
    add_schedule_flags(cmd_schedule, sched.schedule, "--builtin");
    cmd_schedule->add_option("--mu", sched.mu, "mu of the quadratic schedule")->capture_default_str();
    cmd_schedule->add_option("--n-max", sched.n_max)->capture_default_str();
    cmd_schedule->add_option("--output", sched.output, "CSV file (default stdout)");
    cmd_schedule->add_option("--svg", sched.svg, "Write the lambda_n/n plot here");

    SampleArgs sample;
    auto *cmd_sample = app.add_subcommand("sample", "Draw digit sequences from a measure");
    add_measure_flags(cmd_sample, sample.measure);
    cmd_sample->add_option("--depth", sample.depth)->capture_default_str();
    cmd_sample->add_option("--count", sample.count)->capture_default_str();
    cmd_sample->add_option("--seed", sample.seed)->capture_default_str();
    cmd_sample->add_option("--threads", sample.threads, "Worker cap (0: all cores)")->capture_default_str();
    cmd_sample->add_option("--format", sample.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd_sample->add_option("--output", sample.output, "Output file (default stdout)");

    EstimateArgs est;
    auto *cmd_estimate = app.add_subcommand("estimate", "Box-counting dimension versus the closed form");
    cmd_estimate->add_option("--family", est.family, "A, B, B_hat or B_bar")->capture_default_str();
    cmd_estimate->add_option("--M", est.M)->capture_default_str();
    cmd_estimate->add_option("--mu", est.mu, "mu of B_bar")->capture_default_str();
    add_schedule_flags(cmd_estimate, est.schedule, "--schedule");
    cmd_estimate->add_option("--count", est.count)->capture_default_str();
    cmd_estimate->add_option("--depth", est.depth, "Minimum digit depth")->capture_default_str();
    cmd_estimate->add_option("--seed", est.seed)->capture_default_str();
    cmd_estimate->add_option("--threads", est.threads, "Worker cap (0: all cores)")->capture_default_str();
    cmd_estimate->add_option("--k-min", est.k_min, "Smallest scale (default: from the data)");
    cmd_estimate->add_option("--k-max", est.k_max, "Largest scale (default: from the data)");
    cmd_estimate->add_option("--format", est.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd_estimate->add_option("--output", est.output, "Output file (default stdout)");
    cmd_estimate->add_option("--svg", est.svg, "Write the log-log fit plot here");

    LocalDimArgs ld;
    auto *cmd_localdim = app.add_subcommand("localdim", "Local-dimension ratios along one sampled point");
    add_measure_flags(cmd_localdim, ld.measure);
    cmd_localdim->add_option("--n", ld.n, "Number of free digits")->capture_default_str();
    cmd_localdim->add_option("--stride", ld.stride, "Write every stride-th row")->capture_default_str();
    cmd_localdim->add_option("--seed", ld.seed)->capture_default_str();
    cmd_localdim->add_option("--output", ld.output, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << kErrorPrefix << e.what() << '\n';
        return 2;
    }

    try {
        if (*cmd_expand) {
            run_expand(expand);
        } else if (*cmd_dims) {
            run_dims(dims);
        } else if (*cmd_schedule) {
            run_schedule(sched);
        } else if (*cmd_sample) {
            run_sample(sample);
        } else if (*cmd_estimate) {
            run_estimate(est);
        } else if (*cmd_localdim) {
            run_localdim(ld);
        }
    } catch (const std::exception &e) {
        std::cerr << kErrorPrefix << e.what() << '\n';
        return 1;
    }
    return 0;
}
