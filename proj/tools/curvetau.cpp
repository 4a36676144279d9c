// curvetau: exact invariants of reduced plane curve singularities.
//
//   curvetau validate <file>
//   curvetau invariants <file> [--json out]
//   curvetau dimca <file> (--partition 1,2 | --all-partitions) [--json out]
//   curvetau corpus <dir>
//
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 precision
// exhausted, 5 oracle mismatch (a bug, never expected).

#include <curvetau/curvetau.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace curvetau;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void write_json(const Json& j, const std::string& path) {
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::vector<int> parse_partition(const std::string& text, int r) {
    std::vector<int> J;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        int v = std::stoi(tok);
        if (v < 1 || v > r) throw std::runtime_error("branch label out of range: " + tok);
        J.push_back(v - 1);
    }
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    return J;
}

int cmd_validate(const std::string& path) {
    CurveDocument doc = load_curve_document(path);
    ValidationReport rep = validate(doc.curve, doc.settings.precision_cap);
    std::cout << rep.str();
    std::cout << "orders of f_j on branch i:\n";
    for (int i = 0; i < doc.curve.rank(); ++i) {
        std::cout << " ";
        for (int j = 0; j < doc.curve.rank(); ++j)
            std::cout << " " << rep.order_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)].str();
        std::cout << "\n";
    }
    return 0;
}

Json invariants_document(const std::string& path, long* elapsed_ms) {
    Timer timer;
    CurveDocument doc = load_curve_document(path);
    Workspace ws(doc.curve, doc.settings);
    ws.validation();
    Json report;
    report["format"] = "curvetau-report-v1";
    report["input"] = curve_to_json(doc.curve);
    report["invariants"] = invariants_to_json(ws);
    if (ws.rank() > 1) {
        Json dim = Json::array();
        for (const auto& J : all_partitions(ws.rank())) dim.push_back(dimca_to_json(ws.dimca_check(J)));
        report["dimca"] = dim;
    }
    if (elapsed_ms) *elapsed_ms = timer.ms();
    return report;
}

int cmd_invariants(const std::string& path, const std::string& json_out) {
    long ms = 0;
    Json report = invariants_document(path, &ms);
    const Json& inv = report["invariants"];
    std::cout << path << ": r = " << inv["r"] << "\n";
    std::cout << "  tau = " << inv["tau"]["formula"] << " (oracle " << inv["tau"]["oracle"]
              << "), mu = " << inv["mu"]["formula"] << " (oracle " << inv["mu"]["oracle"] << ")\n";
    std::cout << "  tau decomposition: branches " << inv["tau"]["branch"].dump() << " + I "
              << inv["tau"]["sum_intersections"] << " + corrections "
              << inv["tau"]["corrections"].dump() << "\n";
    std::cout << "  Gamma: min " << inv["gamma"]["min"].dump() << " conductor "
              << inv["gamma"]["conductor"].dump() << "\n";
    std::cout << "  Delta: min " << inv["delta"]["min"].dump() << " conductor "
              << inv["delta"]["conductor"].dump() << "\n";
    std::cout << "  Theta(Gamma) = " << inv["theta_gamma_fiber"].dump() << ", Theta(Delta) = "
              << inv["theta_delta_fiber"].dump() << "\n";
    if (report.contains("dimca"))
        for (const auto& d : report["dimca"])
            std::cout << "  dimca J=" << d["J"].dump() << ": slack " << d["slack"] << "\n";
    if (!json_out.empty()) {
        Json with_timings = report;
        with_timings["timings"] = Json{{"total_ms", ms}};
        write_json(with_timings, json_out);
    }
    return 0;
}

int cmd_dimca(const std::string& path, const std::string& partition, bool all,
              const std::string& json_out) {
    Timer timer;
    CurveDocument doc = load_curve_document(path);
    Workspace ws(doc.curve, doc.settings);
    if (ws.rank() < 2) throw std::runtime_error("dimca needs at least two branches");
    std::vector<std::vector<int>> splits;
    if (all)
        splits = all_partitions(ws.rank());
    else
        splits.push_back(parse_partition(partition, ws.rank()));

    Json report;
    report["format"] = "curvetau-report-v1";
    report["input"] = curve_to_json(doc.curve);
    Json dim = Json::array();
    std::cout << "  J | lhs rhs slack certificates\n";
    for (const auto& J : splits) {
        DimcaVerdict v = ws.dimca_check(J);
        dim.push_back(dimca_to_json(v));
        std::cout << "  " << dim.back()["J"].dump() << " | " << v.lhs << " " << v.rhs << " "
                  << v.slack << " " << (v.certificates_hold ? "ok" : "VIOLATED") << "\n";
    }
    report["dimca"] = dim;
    if (!json_out.empty()) {
        report["timings"] = Json{{"total_ms", timer.ms()}};
        write_json(report, json_out);
    }
    return 0;
}

int cmd_corpus(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".curve" || ext == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .curve/.json files in " + dir);

    int failures = 0;
    std::cout << "curve | r | tau | mu | min slack | time\n";
    for (const auto& f : files) {
        Timer timer;
        try {
            long ms = 0;
            Json rep = invariants_document(f.string(), &ms);
            const Json& inv = rep["invariants"];
            long min_slack = -1;
            if (rep.contains("dimca"))
                for (const auto& d : rep["dimca"]) {
                    long s = d["slack"].get<long>();
                    if (min_slack < 0 || s < min_slack) min_slack = s;
                }
            std::cout << f.filename().string() << " | " << inv["r"] << " | "
                      << inv["tau"]["formula"] << " | " << inv["mu"]["formula"] << " | "
                      << (min_slack < 0 ? std::string("-") : std::to_string(min_slack)) << " | "
                      << ms << " ms\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << f.filename().string() << " | FAILED: " << e.what() << "\n";
        }
        (void)timer;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariants of reduced plane curve singularities"};
    app.require_subcommand(1);

    std::string path, json_out, partition, dir;
    bool all_parts = false;

    auto* v = app.add_subcommand("validate", "parse and validate a curve document");
    v->add_option("file", path)->required();

    auto* inv = app.add_subcommand("invariants", "semigroups, value sets, tau, mu, Lambda");
    inv->add_option("file", path)->required();
    inv->add_option("--json", json_out, "write the full report (use - for stdout)");

    auto* dim = app.add_subcommand("dimca", "partition bounds tau(C) <= tau_J + tau_K + 2I - 1");
    dim->add_option("file", path)->required();
    auto* popt = dim->add_option("--partition", partition, "comma-separated branch labels for J");
    dim->add_flag("--all-partitions", all_parts, "every proper split up to complement");
    dim->add_option("--json", json_out);

    auto* corp = app.add_subcommand("corpus", "run the invariants suite over a directory");
    corp->add_option("dir", dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(v)) return cmd_validate(path);
        if (app.got_subcommand(inv)) return cmd_invariants(path, json_out);
        if (app.got_subcommand(dim)) {
            if (!all_parts && popt->count() == 0)
                throw std::runtime_error("dimca needs --partition or --all-partitions");
            return cmd_dimca(path, partition, all_parts, json_out);
        }
        if (app.got_subcommand(corp)) return cmd_corpus(dir);
    } catch (const DocumentParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PolyParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const NonIsolated& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 4;
    } catch (const ConductorNotStabilized& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 4;
    } catch (const OracleMismatch& e) {
        std::cerr << "ORACLE MISMATCH (bug): " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
