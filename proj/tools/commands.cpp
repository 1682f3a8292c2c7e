// Copyright 2026 The spindir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

namespace spindir_cli {

namespace {

using nlohmann::ordered_json;

void check(sd_status status) {
    if (status != SD_OK) {
        std::string what = sd_last_error();
        if (status == SD_SHELL_OVERLAP) {
            what += " (minimum admissible |t| is " +
                    format_double(sd_last_min_admissible_t()) + ")";
        }
        throw ApiError(status, what);
    }
}

template <typename T, void (*Destroy)(T *)> struct Deleter {
    void operator()(T *p) const { Destroy(p); }
};
using ModelPtr = std::unique_ptr<sd_model, Deleter<sd_model, sd_model_destroy>>;
using StatePtr = std::unique_ptr<sd_state, Deleter<sd_state, sd_state_destroy>>;
using ReportPtr = std::unique_ptr<sd_report, Deleter<sd_report, sd_report_destroy>>;
using ScanPtr = std::unique_ptr<sd_scan, Deleter<sd_scan, sd_scan_destroy>>;
using BatchPtr = std::unique_ptr<sd_batch, Deleter<sd_batch, sd_batch_destroy>>;

ModelPtr make_model(const RunConfig &c) {
    const sd_model_config mc{c.twice_j,   c.t,         c.lambda,
                             c.eta_nodes, c.phi_nodes, c.radial_nodes};
    sd_model *m = nullptr;
    check(sd_model_create(&mc, &m));
    return ModelPtr(m);
}

StatePtr make_state(const RunConfig &c) {
    const StateSpec &s = c.state;
    sd_state *out = nullptr;
    if (s.kind == "mixed") {
        check(sd_state_mixed(c.twice_j, &out));
    } else if (s.kind == "basis") {
        check(sd_state_basis(c.twice_j, s.twice_m, &out));
    } else if (s.kind == "coherent") {
        check(sd_state_coherent(c.twice_j, s.theta, s.phi, &out));
    } else if (s.kind == "rotated") {
        check(sd_state_rotated(c.twice_j, s.twice_m, s.theta, s.phi, &out));
    } else if (s.kind == "matrix") {
        std::vector<sd_complex> z;
        for (std::size_t i = 0; i + 1 < s.entries.size(); i += 2) {
            z.push_back({s.entries[i], s.entries[i + 1]});
        }
        check(sd_state_from_matrix(c.twice_j, z.data(), z.size(),
                                   c.tolerances.state_trace, &out));
    } else {
        throw UsageError("unknown state kind '" + s.kind + "'");
    }
    return StatePtr(out);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return q + "\"";
}

// A table or document destined for one file; written only when complete.
class Output {
  public:
    Output(const RunConfig &config, std::string path)
        : config_(config), path_(std::move(path)) {}

    void write_csv(const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &rows) const {
        std::ostringstream os;
        os << "# config: " << to_json(config_).dump() << "\n";
        os << "# generated_at: " << timestamp_now() << "\n";
        emit_row(os, header);
        for (const auto &r : rows) {
            emit_row(os, r);
        }
        commit(os.str());
    }

    void write_json(ordered_json payload) const {
        ordered_json doc;
        doc["config"] = to_json(config_);
        doc["generated_at"] = timestamp_now();
        for (auto &[k, v] : payload.items()) {
            doc[k] = v;
        }
        commit(doc.dump(2) + "\n");
    }

  private:
    static void emit_row(std::ostream &os, const std::vector<std::string> &row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_field(row[i]);
        }
        os << "\n";
    }

    void commit(const std::string &text) const {
        if (path_.empty()) {
            std::cout << text;
            return;
        }
        const std::filesystem::path target(path_);
        if (target.has_parent_path()) {
            std::filesystem::create_directories(target.parent_path());
        }
        const std::string tmp = path_ + ".partial";
        {
            std::ofstream f(tmp, std::ios::binary);
            f << text;
            if (!f) {
                throw std::runtime_error("cannot write '" + path_ + "'");
            }
        }
        std::filesystem::rename(tmp, target);
    }

    const RunConfig &config_;
    std::string path_;
};

std::string str(double v) { return format_double(v); }

ordered_json matrix_json(const std::vector<sd_complex> &m, int d) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < d; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < d; ++c) {
            row.push_back({{"re", m[r * d + c].re}, {"im", m[r * d + c].im}});
        }
        rows.push_back(row);
    }
    return rows;
}

int cmd_povm_element(const RunConfig &c) {
    const ModelPtr model = make_model(c);
    const int d = sd_model_dimension(model.get());
    const auto n = static_cast<std::size_t>(d * d);
    std::vector<sd_complex> omega(n), povm(n);
    check(sd_omega(model.get(), c.x, c.theta, c.phi, omega.data(), n));
    check(sd_povm_element(model.get(), c.x, c.theta, c.phi, povm.data(), n));
    std::vector<double> omega_ev(d), povm_ev(d);
    check(sd_hermitian_eigenvalues(d, omega.data(), omega_ev.data()));
    check(sd_hermitian_eigenvalues(d, povm.data(), povm_ev.data()));

    const Output out(c, c.out);
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto &[name, m] : {std::pair{"omega", &omega}, std::pair{"povm", &povm}}) {
            for (int r = 0; r < d; ++r) {
                for (int k = 0; k < d; ++k) {
                    const sd_complex z = (*m)[r * d + k];
                    rows.push_back({name, std::to_string(r), std::to_string(k), str(z.re),
                                    str(z.im)});
                }
            }
        }
        for (int r = 0; r < d; ++r) {
            rows.push_back({"omega_eigenvalue", std::to_string(r), "", str(omega_ev[r]), "0"});
        }
        for (int r = 0; r < d; ++r) {
            rows.push_back({"povm_eigenvalue", std::to_string(r), "", str(povm_ev[r]), "0"});
        }
        out.write_csv({"quantity", "row", "col", "re", "im"}, rows);
    } else {
        out.write_json({{"omega", matrix_json(omega, d)},
                        {"povm", matrix_json(povm, d)},
                        {"omega_eigenvalues", omega_ev},
                        {"povm_eigenvalues", povm_ev}});
    }
    return 0;
}

int cmd_audit(const RunConfig &c) {
    const ModelPtr model = make_model(c);
    sd_report *raw = nullptr;
    check(sd_audit_run(model.get(), c.seed, &raw));
    const ReportPtr report(raw);
    const bool passed = sd_report_passed(report.get()) == 1;

    std::vector<sd_check> checks(sd_report_size(report.get()));
    for (std::size_t i = 0; i < checks.size(); ++i) {
        check(sd_report_check(report.get(), i, &checks[i]));
    }
    const Output out(c, c.out);
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto &k : checks) {
            rows.push_back({k.name, str(k.deviation), str(k.tolerance),
                            k.passed ? "1" : "0", k.warning ? "1" : "0", k.note});
        }
        out.write_csv({"check", "deviation", "tolerance", "passed", "warning", "note"}, rows);
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto &k : checks) {
            arr.push_back({{"check", k.name},
                           {"deviation", k.deviation},
                           {"tolerance", k.tolerance},
                           {"passed", k.passed == 1},
                           {"warning", k.warning == 1},
                           {"note", k.note}});
        }
        out.write_json({{"passed", passed}, {"checks", arr}});
    }
    for (const auto &k : checks) {
        if (!k.passed) {
            std::cerr << "audit: " << k.name << " failed: deviation "
                      << str(k.deviation) << " tolerance " << str(k.tolerance)
                      << (k.note[0] ? std::string(" (") + k.note + ")" : "") << "\n";
        }
    }
    return passed ? 0 : 1;
}

int cmd_convergence_scan(const RunConfig &c) {
    const ModelPtr model = make_model(c);
    const StatePtr state = make_state(c);
    sd_scan *raw = nullptr;
    check(sd_convergence_scan(model.get(), state.get(), c.lambdas.data(), c.lambdas.size(),
                              &raw));
    const ScanPtr scan(raw);
    std::vector<sd_scan_row> rows(sd_scan_size(scan.get()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check(sd_scan_row_at(scan.get(), i, &rows[i]));
    }
    const bool monotone = sd_scan_monotone(scan.get(), c.tolerances.monotone_slack) == 1;

    const Output out(c, c.out);
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> table;
        for (const auto &r : rows) {
            table.push_back({str(r.lambda), std::to_string(r.twice_m), str(r.shell_mass),
                             str(r.limit_mass), str(r.abs_error), str(r.shell_probability),
                             str(r.limit_probability)});
        }
        out.write_csv({"lambda", "m_times_2", "shell_mass", "limit_mass", "abs_error",
                       "shell_probability", "limit_probability"},
                      table);
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto &r : rows) {
            arr.push_back({{"lambda", r.lambda},
                           {"m_times_2", r.twice_m},
                           {"shell_mass", r.shell_mass},
                           {"limit_mass", r.limit_mass},
                           {"abs_error", r.abs_error},
                           {"shell_probability", r.shell_probability},
                           {"limit_probability", r.limit_probability}});
        }
        out.write_json({{"monotone", monotone}, {"rows", arr}});
    }
    if (!monotone) {
        std::cerr << "convergence-scan: abs_error is not weakly decreasing as lambda "
                     "decreases for every m\n";
        return 1;
    }
    return 0;
}

int cmd_sample(const RunConfig &c) {
    if (c.out.empty()) {
        throw UsageError("sample needs --out (outcomes and summary are separate files)");
    }
    if (c.model != "limit" && c.model != "finite") {
        throw UsageError("--model must be limit or finite");
    }
    const ModelPtr model = make_model(c);
    const StatePtr state = make_state(c);
    sd_batch *raw = nullptr;
    check(sd_sample(model.get(), state.get(),
                    c.model == "limit" ? SD_MODEL_LIMIT : SD_MODEL_FINITE, c.count, c.seed,
                    &raw));
    const BatchPtr batch(raw);
    std::vector<sd_record> records(sd_batch_size(batch.get()));
    for (std::size_t i = 0; i < records.size(); ++i) {
        check(sd_batch_record(batch.get(), i, &records[i]));
    }
    sd_summary summary{};
    check(sd_batch_summary(batch.get(), &summary));
    std::size_t n_shells = 0;
    check(sd_batch_shells(batch.get(), nullptr, 0, &n_shells));
    std::vector<sd_shell_count> shells(n_shells);
    check(sd_batch_shells(batch.get(), shells.data(), shells.size(), &n_shells));

    const Output outcomes(c, c.out);
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(records.size());
        for (const auto &r : records) {
            rows.push_back({r.has_m ? std::to_string(r.twice_m) : "", str(r.x), str(r.theta),
                            str(r.phi), str(r.density)});
        }
        outcomes.write_csv({"m_times_2", "x", "theta", "phi", "density"}, rows);
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto &r : records) {
            arr.push_back({{"m_times_2", r.has_m ? ordered_json(r.twice_m) : ordered_json()},
                           {"x", r.x},
                           {"theta", r.theta},
                           {"phi", r.phi},
                           {"density", r.density}});
        }
        outcomes.write_json({{"outcomes", arr}});
    }

    ordered_json per_m = ordered_json::array();
    for (const auto &s : shells) {
        per_m.push_back({{"m_times_2", s.twice_m},
                         {"count", s.count},
                         {"probability", s.probability}});
    }
    const Output summary_out(c, c.out + ".summary.json");
    summary_out.write_json(
        {{"count", records.size()},
         {"mean_direction", {summary.mean_direction[0], summary.mean_direction[1],
                             summary.mean_direction[2]}},
         {"concentration", summary.concentration},
         {"direction_standard_error", summary.direction_standard_error},
         {"concentration_standard_error", summary.concentration_standard_error},
         {"used_for_direction", summary.used},
         {"unassigned", summary.unassigned},
         {"normalization_deviation", summary.normalization_deviation},
         {"shells", per_m}});
    return 0;
}

int cmd_completeness(const RunConfig &c) {
    const ModelPtr model = make_model(c);
    sd_completeness r{};
    check(sd_completeness_run(model.get(), &r));
    struct Row {
        const char *name;
        double deviation;
        double tolerance;
        int warning;
    };
    const std::vector<Row> rows{{"coherent", r.coherent, 1e-10, r.coherent_warning},
                                {"finite", r.finite, 1e-6, r.finite_warning},
                                {"limit", r.limit, 1e-10, r.limit_warning}};
    bool ok = true;
    for (const auto &row : rows) {
        ok = ok && row.deviation < row.tolerance && row.warning == 0;
    }
    const Output out(c, c.out);
    if (c.format == "csv") {
        std::vector<std::vector<std::string>> table;
        for (const auto &row : rows) {
            const bool pass = row.deviation < row.tolerance && row.warning == 0;
            table.push_back({row.name, str(row.deviation), str(row.tolerance),
                             pass ? "1" : "0", row.warning ? "1" : "0"});
        }
        out.write_csv({"relation", "deviation", "tolerance", "passed", "warning"}, table);
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto &row : rows) {
            arr.push_back({{"relation", row.name},
                           {"deviation", row.deviation},
                           {"tolerance", row.tolerance},
                           {"passed", row.deviation < row.tolerance && row.warning == 0},
                           {"warning", row.warning == 1}});
        }
        out.write_json({{"passed", ok}, {"relations", arr}});
    }
    return ok ? 0 : 1;
}

} // namespace

int run_command(const RunConfig &config) {
    if (config.format != "csv" && config.format != "json") {
        throw UsageError("--format must be csv or json");
    }
    if (config.command == "povm-element") {
        return cmd_povm_element(config);
    }
    if (config.command == "audit") {
        return cmd_audit(config);
    }
    if (config.command == "convergence-scan") {
        return cmd_convergence_scan(config);
    }
    if (config.command == "sample") {
        return cmd_sample(config);
    }
    if (config.command == "completeness") {
        return cmd_completeness(config);
    }
    throw UsageError("no command given (povm-element, audit, convergence-scan, "
                     "sample, completeness)");
}

} // namespace spindir_cli
