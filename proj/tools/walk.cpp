// Command-line front end: runs one of the three walk models and emits the
// entropy series as CSV or SVG, or scans the first entropy drop against the
// scatterer transparency.
//
// Exit codes: 0 success, 2 invalid flags or parameter values, 3 I/O or
// numerical failure.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinwalk/spinwalk.hpp"

namespace {

spinwalk::SpinWindow parse_window(const std::string& spec) {
    if (spec == "none") return spinwalk::SpinWindow::none();
    if (spec == "all") return spinwalk::SpinWindow::all();
    try {
        std::size_t used = 0;
        const int count = std::stoi(spec, &used);
        if (used == spec.size()) return spinwalk::SpinWindow::finite(count);
    } catch (const spinwalk::InvalidWindow&) {
        throw;
    } catch (const std::exception&) {
    }
    throw spinwalk::InvalidWindow("--spins expects none, all or an odd count, got '" + spec + "'");
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("value for '" + key + "' is not a number: " + value);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("value for '" + key + "' is not an integer: " + value);
}

/// One `key = value` per line, `#` starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw spinwalk::IoFailure("cannot open config file " + path);
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return std::string();
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    };
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        const std::string key = eq == std::string::npos ? "" : trim(content.substr(0, eq));
        const std::string value = eq == std::string::npos ? "" : trim(content.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        if (!entries.emplace(key, value).second)
            throw std::invalid_argument(path + ": duplicate key '" + key + "'");
    }
    return entries;
}

/// Per-subcommand `--config` support. Keys mirror the long flags; a key
/// applies only when the flag was not given on the command line, and unknown
/// keys are rejected.
class ConfiguredCommand {
  public:
    explicit ConfiguredCommand(CLI::App* cmd) {
        cmd->add_option("--config", path_, "key = value file mirroring the flags");
    }

    void bind(CLI::Option* option, const std::string& key,
              std::function<void(const std::string&)> apply) {
        bindings_[key] = {option, std::move(apply)};
    }

    void merge() const {
        if (path_.empty()) return;
        for (const auto& [key, value] : load_config(path_)) {
            const auto it = bindings_.find(key);
            if (it == bindings_.end())
                throw std::invalid_argument(path_ + ": unknown key '" + key + "'");
            if (it->second.option->count() == 0) it->second.apply(value);
        }
    }

  private:
    struct Binding {
        CLI::Option* option;
        std::function<void(const std::string&)> apply;
    };
    std::string path_;
    std::map<std::string, Binding> bindings_;
};

struct SeriesOptions {
    std::optional<double> transparency;
    std::optional<double> beta;
    std::optional<int> steps;
    int outputs = 2;
    std::string spins = "all";
    std::string out;
    std::string format = "csv";
};

void require_present(const std::optional<double>& value, const char* flag) {
    if (!value) throw std::invalid_argument(std::string(flag) + " is required");
}

void require_present(const std::optional<int>& value, const char* flag) {
    if (!value) throw std::invalid_argument(std::string(flag) + " is required");
}

std::string drops_summary(const std::vector<int>& drops) {
    if (drops.empty()) return "no entropy drops";
    std::string out = "drops at tau =";
    for (int tau : drops) out += " " + std::to_string(tau);
    return out;
}

int emit_series(const spinwalk::EntropySeries& series, const SeriesOptions& options) {
    if (options.format != "csv" && options.format != "svg")
        throw std::invalid_argument("--format expects csv or svg, got '" + options.format + "'");
    const auto drops = spinwalk::detect_drops(series);
    char final_entropy[32];
    std::snprintf(final_entropy, sizeof final_entropy, "%.6g", series.values.back());
    std::cout << series.meta.label() << " steps=" << series.meta.steps << ": final entropy "
              << final_entropy << "; " << drops_summary(drops) << "\n";
    if (!options.out.empty()) {
        if (options.format == "svg")
            spinwalk::render_series_svg({series}, options.out);
        else
            spinwalk::write_series_csv(series, options.out);
        std::cout << "wrote " << options.out << "\n";
    }
    return 0;
}

/// Wires --T/--beta/--Z/--spins/--steps/--out/--format onto a model
/// subcommand, with matching config keys.
ConfiguredCommand wire_model(CLI::App* cmd, SeriesOptions& opt, bool with_beta, bool with_outputs,
                             bool with_spins) {
    ConfiguredCommand config(cmd);
    auto* T = cmd->add_option("--T", opt.transparency, "scatterer transparency");
    config.bind(T, "T", [&opt](const std::string& v) { opt.transparency = parse_real("T", v); });
    if (with_beta) {
        auto* beta = cmd->add_option("--beta", opt.beta, "spin record overlap");
        config.bind(beta, "beta",
                    [&opt](const std::string& v) { opt.beta = parse_real("beta", v); });
    }
    if (with_outputs) {
        auto* outputs = cmd->add_option("--Z", opt.outputs, "splitter outputs");
        config.bind(outputs, "Z",
                    [&opt](const std::string& v) { opt.outputs = parse_int("Z", v); });
    }
    if (with_spins) {
        auto* spins = cmd->add_option("--spins", opt.spins, "spin window: none, all or an odd count");
        config.bind(spins, "spins", [&opt](const std::string& v) { opt.spins = v; });
    }
    auto* steps =
        cmd->add_option("--steps", opt.steps, "number of steps")->check(CLI::NonNegativeNumber);
    config.bind(steps, "steps",
                [&opt](const std::string& v) { opt.steps = parse_int("steps", v); });
    auto* out = cmd->add_option("--out", opt.out, "output file path");
    config.bind(out, "out", [&opt](const std::string& v) { opt.out = v; });
    auto* format = cmd->add_option("--format", opt.format, "output format: csv or svg");
    config.bind(format, "format", [&opt](const std::string& v) { opt.format = v; });
    return config;
}

struct ScanOptions {
    std::optional<double> t_min, t_max, t_step;
    int steps = 60;
    std::string out;
};

int run_scan(const ScanOptions& opt) {
    require_present(opt.t_min, "--T-min");
    require_present(opt.t_max, "--T-max");
    require_present(opt.t_step, "--T-step");
    if (!(*opt.t_step > 0.0) || *opt.t_min > *opt.t_max || *opt.t_min <= 0.0 || *opt.t_max >= 1.0)
        throw std::invalid_argument("scan needs 0 < T-min <= T-max < 1 and T-step > 0");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double T = *opt.t_min + k * *opt.t_step;
        if (T > *opt.t_max + 1e-12) break;
        grid.push_back(T);
    }
    const auto scan = spinwalk::first_drop_scan(grid, opt.steps);
    if (opt.out.empty()) {
        std::cout << spinwalk::scan_csv(scan);
    } else {
        spinwalk::write_scan_csv(scan, opt.out);
        std::cout << "scan first-drop: " << scan.size() << " transparencies; wrote " << opt.out
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum walk entropy simulator"};
    app.require_subcommand(1);

    SeriesOptions line_opt, tree_opt, lattice_opt;
    ScanOptions scan_opt;

    CLI::App* line = app.add_subcommand("line", "1D walk over scatterers with spins");
    const auto line_config = wire_model(line, line_opt, false, false, true);

    CLI::App* tree = app.add_subcommand("tree", "interference-free splitter tree");
    const auto tree_config = wire_model(tree, tree_opt, true, true, false);

    CLI::App* lattice = app.add_subcommand("lattice", "interference lattice with fresh spin sets");
    const auto lattice_config = wire_model(lattice, lattice_opt, true, false, false);

    CLI::App* scan = app.add_subcommand("scan", "parameter scans");
    scan->require_subcommand(1);
    CLI::App* first_drop = scan->add_subcommand("first-drop", "first entropy drop vs transparency");
    ConfiguredCommand scan_config(first_drop);
    auto* t_min = first_drop->add_option("--T-min", scan_opt.t_min, "lowest transparency");
    scan_config.bind(t_min, "T-min",
                     [&](const std::string& v) { scan_opt.t_min = parse_real("T-min", v); });
    auto* t_max = first_drop->add_option("--T-max", scan_opt.t_max, "highest transparency");
    scan_config.bind(t_max, "T-max",
                     [&](const std::string& v) { scan_opt.t_max = parse_real("T-max", v); });
    auto* t_step = first_drop->add_option("--T-step", scan_opt.t_step, "transparency grid step");
    scan_config.bind(t_step, "T-step",
                     [&](const std::string& v) { scan_opt.t_step = parse_real("T-step", v); });
    auto* scan_steps = first_drop->add_option("--steps", scan_opt.steps, "steps per run")
                           ->check(CLI::PositiveNumber);
    scan_config.bind(scan_steps, "steps",
                     [&](const std::string& v) { scan_opt.steps = parse_int("steps", v); });
    auto* scan_out = first_drop->add_option("--out", scan_opt.out, "output CSV path");
    scan_config.bind(scan_out, "out", [&](const std::string& v) { scan_opt.out = v; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(line)) {
            line_config.merge();
            require_present(line_opt.transparency, "--T");
            require_present(line_opt.steps, "--steps");
            return emit_series(spinwalk::run_line(*line_opt.transparency,
                                                  parse_window(line_opt.spins), *line_opt.steps),
                               line_opt);
        }
        if (app.got_subcommand(tree)) {
            tree_config.merge();
            require_present(tree_opt.transparency, "--T");
            require_present(tree_opt.beta, "--beta");
            require_present(tree_opt.steps, "--steps");
            const auto params = spinwalk::make_tree_params(tree_opt.outputs,
                                                           *tree_opt.transparency, *tree_opt.beta);
            return emit_series(spinwalk::run_tree(params, *tree_opt.steps), tree_opt);
        }
        if (app.got_subcommand(lattice)) {
            lattice_config.merge();
            require_present(lattice_opt.transparency, "--T");
            require_present(lattice_opt.beta, "--beta");
            require_present(lattice_opt.steps, "--steps");
            return emit_series(spinwalk::run_lattice(*lattice_opt.transparency, *lattice_opt.beta,
                                                     *lattice_opt.steps),
                               lattice_opt);
        }
        scan_config.merge();
        return run_scan(scan_opt);
    } catch (const spinwalk::DimensionCap& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return 2;
    } catch (const spinwalk::PathCap& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "walk: " << e.what() << "\n";
        return 3;
    }
}
