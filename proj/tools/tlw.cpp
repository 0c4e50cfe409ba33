// tlw: experiment driver for the weighted Triebel-Lizorkin toolkit.

#include <CLI11.hpp>

#include <iostream>

#include "tlw/experiment.hpp"
#include "tlw/fixtures.hpp"
#include "tlw/phitransform.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        tlw::write_text(out, text);
}

int cmd_run(const std::string& config, bool strict, const std::string& out) {
    const tlw::ExperimentConfig cfg = tlw::load_config(config);
    const tlw::Report report = tlw::run(cfg, tlw::thread_budget());
    emit(tlw::to_json(report).dump(2) + "\n", out);
    int pass = 0, fail = 0, soft = 0, skip = 0, measured = 0;
    for (const auto& s : report.suites)
        for (const auto& c : s.checks) {
            switch (c.status) {
                case tlw::Status::Pass: ++pass; break;
                case tlw::Status::Measured: ++measured; break;
                case tlw::Status::Skip: ++skip; break;
                case tlw::Status::Fail:
                    (c.severity == tlw::Severity::Hard ? fail : soft) += 1;
                    std::cerr << "FAIL " << s.name << "/" << c.name << (c.reason.empty() ? "" : ": " + c.reason)
                              << "\n";
                    break;
            }
        }
    std::cerr << "checks: " << pass << " pass, " << fail << " hard fail, " << soft << " soft fail, " << measured
              << " measured, " << skip << " skipped\n";
    return tlw::exit_status(report, strict);
}

int cmd_report(const std::string& in, const std::string& format, const std::string& out) {
    tlw::Json doc;
    try {
        doc = tlw::Json::parse(tlw::read_text(in));
    } catch (const nlohmann::json::exception& e) {
        throw tlw::IoError("invalid JSON in " + in + ": " + e.what());
    }
    const tlw::Report report = tlw::report_from_json(doc);
    emit(format == "csv" ? tlw::to_csv(report) : tlw::to_json(report).dump(2) + "\n", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Triebel-Lizorkin toolkit: identity and inequality suites on dyadic grids"};
    app.set_version_flag("--version", tlw::kToolkitVersion);
    app.require_subcommand(1);

    std::string config, out;
    bool strict = false;
    auto* run = app.add_subcommand("run", "Run the configured suites and write a JSON report");
    run->add_option("-c,--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_flag("--strict", strict, "Soft failures (regression drift) also give a nonzero exit");
    run->add_option("-o,--output", out, "Report path (default stdout)");

    std::string kind, fixture_out, encoding = "binary";
    tlw::FixtureParams fp;
    int k_min = 0, k_max = 0;
    auto* fixture = app.add_subcommand("fixture", "Write a deterministic fixture file");
    fixture->add_option("kind", kind, "exp2 | power | random-ap | band-signal | coeff-field")
        ->required()
        ->check(CLI::IsMember(tlw::fixture_kinds()));
    fixture->add_option("-o,--output", fixture_out, "Header path (data goes next to it)")->required();
    fixture->add_option("--n", fp.n, "Dimension (1 or 2)");
    fixture->add_option("--L", fp.L, "Domain [0, 2^L)^n");
    fixture->add_option("--J", fp.J, "Finest level");
    auto* kmin_opt = fixture->add_option("--k-min", k_min, "Lowest level (default -L)");
    auto* kmax_opt = fixture->add_option("--k-max", k_max, "Highest level");
    fixture->add_option("--s", fp.s, "Level exponent s in 2^{ks}");
    fixture->add_option("--alpha", fp.alpha, "Power weight exponent");
    fixture->add_option("--level", fp.level, "random-ap: level of the constant pieces");
    fixture->add_option("--ratio", fp.ratio, "random-ap: value range [1/ratio, ratio]");
    fixture->add_option("--band-lo", fp.band_lo, "band-signal: lowest dyadic band 2^lo");
    fixture->add_option("--band-hi", fp.band_hi, "band-signal: highest dyadic band 2^hi");
    fixture->add_option("--encoding", encoding, "binary | csv")->check(CLI::IsMember({"binary", "csv"}));
    fixture->add_option("--seed", fp.seed, "Random seed");

    std::string report_in, report_out, format = "csv";
    auto* report = app.add_subcommand("report", "Convert a JSON report");
    report->add_option("-i,--input", report_in, "JSON report")->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    report->add_option("-o,--output", report_out, "Output path (default stdout)");

    int sn = 1, sL = 2, sJ = 6;
    double width = 1.0;
    std::string spectrum_out;
    auto* spectrum = app.add_subcommand("spectrum", "Export the filter pair as CSV of |xi|, Phi, Psi");
    spectrum->add_option("--n", sn, "Dimension (1 or 2)");
    spectrum->add_option("--L", sL, "Domain [0, 2^L)^n");
    spectrum->add_option("--J", sJ, "Finest level");
    spectrum->add_option("--width", width, "Transition width in (0, 1]");
    spectrum->add_option("-o,--output", spectrum_out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, strict, out);
        if (*fixture) {
            if (*kmin_opt) fp.k_min = k_min;
            if (*kmax_opt) fp.k_max = k_max;
            fp.encoding = encoding == "csv" ? tlw::Encoding::Csv : tlw::Encoding::Binary;
            tlw::write_fixture(kind, fp, fixture_out);
            return 0;
        }
        if (*report) return cmd_report(report_in, format, report_out);
        if (*spectrum) {
            emit(tlw::build_filter_pair(tlw::Grid(sn, sL, sJ), width).spectrum_csv(), spectrum_out);
            return 0;
        }
    } catch (const tlw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tlw::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const tlw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
