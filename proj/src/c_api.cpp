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


#include "spindir/spindir.h"

#include <algorithm>
#include <exception>
#include <functional>
#include <memory>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spindir/audit.hpp"

struct sd_model {
    spindir::HalfInteger j;
    spindir::ModelParams params;
    spindir::SphereGrid sphere;
    spindir::RadialGrid radial;
    sd_model_config config;
};

struct sd_state {
    spindir::SpinState state;
};

struct sd_report {
    spindir::AuditReport report;
};

struct sd_scan {
    std::vector<sd_scan_row> rows;
};

struct sd_batch {
    spindir::SampleBatch batch;
    spindir::DirectionEstimate estimate;
};

namespace {

thread_local std::string last_error;
thread_local double last_min_t = 0.0;

sd_status fail(sd_status code, const char *what) {
    last_error = what;
    return code;
}

// Runs body, mapping library exceptions onto status codes.
template <typename F> sd_status guarded(F &&body) {
    try {
        last_min_t = 0.0;
        body();
        return SD_OK;
    } catch (const spindir::ShellOverlap &e) {
        last_min_t = e.min_admissible_t();
        return fail(SD_SHELL_OVERLAP, e.what());
    } catch (const spindir::InvalidArgument &e) {
        return fail(SD_INVALID_ARGUMENT, e.what());
    } catch (const spindir::ValidationError &e) {
        return fail(SD_VALIDATION_FAILED, e.what());
    } catch (const spindir::NonConvergence &e) {
        return fail(SD_NONCONVERGENCE, e.what());
    } catch (const spindir::ZeroProbability &e) {
        return fail(SD_ZERO_PROBABILITY, e.what());
    } catch (const std::exception &e) {
        return fail(SD_INTERNAL, e.what());
    } catch (...) {
        return fail(SD_INTERNAL, "unknown failure");
    }
}

void require(bool ok, const char *what) {
    if (!ok) {
        throw spindir::InvalidArgument(what);
    }
}

void write_matrix(const spindir::CMatrix &m, sd_complex *out, std::size_t capacity) {
    const auto d = static_cast<std::size_t>(m.rows());
    require(out != nullptr && capacity >= d * d, "output buffer too small");
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const spindir::Complex z = m(static_cast<Eigen::Index>(r),
                                         static_cast<Eigen::Index>(c));
            out[r * d + c] = {z.real(), z.imag()};
        }
    }
}

sd_status make_state(sd_state **out, const std::function<spindir::SpinState()> &build) {
    if (out == nullptr) {
        return fail(SD_INVALID_ARGUMENT, "null output handle");
    }
    *out = nullptr;
    return guarded([&] { *out = new sd_state{build()}; });
}

} // namespace

extern "C" {

const char *sd_version(void) { return "1.0.0"; }

const char *sd_last_error(void) { return last_error.c_str(); }

double sd_last_min_admissible_t(void) { return last_min_t; }

void sd_model_config_default(sd_model_config *config) {
    if (config != nullptr) {
        *config = {1, 1.0, 0.1, 64, 128, 2048};
    }
}

sd_status sd_model_create(const sd_model_config *config, sd_model **out) {
    if (config == nullptr || out == nullptr) {
        return fail(SD_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const spindir::HalfInteger j = spindir::spin(config->twice_j);
        const auto params = spindir::ModelParams::make(config->t, config->lambda);
        auto sphere = spindir::SphereGrid::product(config->eta_nodes, config->phi_nodes);
        auto radial = spindir::RadialGrid::for_outcomes(j, params.t, params.lambda,
                                                        config->radial_nodes);
        *out = new sd_model{j, params, std::move(sphere), std::move(radial), *config};
    });
}

void sd_model_destroy(sd_model *model) { delete model; }

int sd_model_dimension(const sd_model *model) {
    return model == nullptr ? 0 : spindir::dimension(model->j);
}

sd_status sd_state_basis(int twice_j, int twice_m, sd_state **out) {
    return make_state(out, [=] {
        return spindir::SpinState::basis(spindir::spin(twice_j),
                                         spindir::HalfInteger::from_twice(twice_m));
    });
}

sd_status sd_state_coherent(int twice_j, double theta, double phi, sd_state **out) {
    return make_state(out, [=] {
        return spindir::spin_coherent_state(spindir::spin(twice_j),
                                            spindir::Direction(theta, phi));
    });
}

sd_status sd_state_rotated(int twice_j, int twice_m, double theta, double phi,
                           sd_state **out) {
    return make_state(out, [=] {
        const auto j = spindir::spin(twice_j);
        return spindir::SpinState::pure(
            j, spindir::rotated_basis_state(j, spindir::Direction(theta, phi),
                                            spindir::HalfInteger::from_twice(twice_m)));
    });
}

sd_status sd_state_mixed(int twice_j, sd_state **out) {
    return make_state(out, [=] {
        return spindir::SpinState::maximally_mixed(spindir::spin(twice_j));
    });
}

sd_status sd_state_from_matrix(int twice_j, const sd_complex *entries, size_t count,
                               double trace_tolerance, sd_state **out) {
    return make_state(out, [=] {
        const auto j = spindir::spin(twice_j);
        const auto d = static_cast<std::size_t>(spindir::dimension(j));
        require(entries != nullptr, "null matrix entries");
        require(count == d * d, "entry count does not match (twice_j+1)^2");
        spindir::CMatrix rho(d, d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                const sd_complex z = entries[r * d + c];
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {z.re, z.im};
            }
        }
        return spindir::SpinState::from_matrix(j, std::move(rho), trace_tolerance);
    });
}

void sd_state_destroy(sd_state *state) { delete state; }

int sd_state_dimension(const sd_state *state) {
    return state == nullptr ? 0 : state->state.dim();
}

sd_status sd_omega(const sd_model *model, double x, double theta, double phi,
                   sd_complex *out, size_t capacity) {
    return guarded([&] {
        require(model != nullptr, "null model");
        const spindir::ContinuousOutcome outcome(x, spindir::Direction(theta, phi));
        write_matrix(spindir::omega_full(model->j, model->params, outcome).matrix, out,
                     capacity);
    });
}

sd_status sd_povm_element(const sd_model *model, double x, double theta, double phi,
                          sd_complex *out, size_t capacity) {
    return guarded([&] {
        require(model != nullptr, "null model");
        const spindir::ContinuousOutcome outcome(x, spindir::Direction(theta, phi));
        const spindir::CMatrix omega =
            spindir::omega_full(model->j, model->params, outcome).matrix;
        write_matrix(omega.adjoint() * omega, out, capacity);
    });
}

sd_status sd_hermitian_eigenvalues(int dim, const sd_complex *matrix, double *out) {
    return guarded([&] {
        require(dim > 0 && matrix != nullptr && out != nullptr, "invalid matrix");
        spindir::CMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                m(r, c) = {matrix[r * dim + c].re, matrix[r * dim + c].im};
            }
        }
        const Eigen::VectorXd ev = spindir::hermitian_eigenvalues(m);
        std::copy(ev.data(), ev.data() + dim, out);
    });
}

sd_status sd_completeness_run(const sd_model *model, sd_completeness *out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const auto coh = spindir::coherent_completeness(model->j, model->sphere);
        const auto fin = spindir::povm_completeness(model->j, model->params,
                                                    model->radial, model->sphere);
        const auto lim =
            spindir::limit_completeness(model->j, model->params.t, model->sphere);
        *out = {coh.deviation, fin.deviation, lim.deviation,
                coh.warning ? 1 : 0, fin.warning ? 1 : 0, lim.warning ? 1 : 0};
    });
}

sd_status sd_audit_run(const sd_model *model, uint64_t seed, sd_report **out) {
    if (out == nullptr) {
        return fail(SD_INVALID_ARGUMENT, "null output handle");
    }
    *out = nullptr;
    return guarded([&] {
        require(model != nullptr, "null model");
        spindir::AuditConfig config;
        config.j = model->j;
        config.params = model->params;
        config.eta_nodes = model->config.eta_nodes;
        config.phi_nodes = model->config.phi_nodes;
        config.radial_nodes = model->config.radial_nodes;
        config.seed = seed;
        *out = new sd_report{spindir::run_audit(config)};
    });
}

void sd_report_destroy(sd_report *report) { delete report; }

size_t sd_report_size(const sd_report *report) {
    return report == nullptr ? 0 : report->report.checks.size();
}

int sd_report_passed(const sd_report *report) {
    return report != nullptr && report->report.passed() ? 1 : 0;
}

sd_status sd_report_check(const sd_report *report, size_t index, sd_check *out) {
    return guarded([&] {
        require(report != nullptr && out != nullptr, "null argument");
        require(index < report->report.checks.size(), "check index out of range");
        const auto &c = report->report.checks[index];
        *out = {c.name.c_str(), c.deviation, c.tolerance, c.passed ? 1 : 0,
                c.warning ? 1 : 0, c.note.c_str()};
    });
}

sd_status sd_convergence_scan(const sd_model *model, const sd_state *state,
                              const double *lambdas, size_t count, sd_scan **out) {
    if (out == nullptr) {
        return fail(SD_INVALID_ARGUMENT, "null output handle");
    }
    *out = nullptr;
    return guarded([&] {
        require(model != nullptr && state != nullptr, "null argument");
        require(lambdas != nullptr && count > 0, "empty lambda list");
        require(state->state.j() == model->j, "state and model spins differ");
        // validate every window before doing any work
        for (std::size_t i = 0; i < count; ++i) {
            spindir::shell_windows(model->j,
                                   spindir::ModelParams::make(model->params.t, lambdas[i]));
        }
        auto scan = std::make_unique<sd_scan>();
        for (std::size_t i = 0; i < count; ++i) {
            const auto params = spindir::ModelParams::make(model->params.t, lambdas[i]);
            for (const auto &s : spindir::shell_masses(state->state, params, model->sphere)) {
                scan->rows.push_back({lambdas[i], s.m.twice(), s.resolved_mass,
                                      s.resolved_limit,
                                      std::abs(s.resolved_mass - s.resolved_limit),
                                      s.probability, s.probability_limit});
            }
        }
        *out = scan.release();
    });
}

void sd_scan_destroy(sd_scan *scan) { delete scan; }

size_t sd_scan_size(const sd_scan *scan) { return scan == nullptr ? 0 : scan->rows.size(); }

sd_status sd_scan_row_at(const sd_scan *scan, size_t index, sd_scan_row *out) {
    return guarded([&] {
        require(scan != nullptr && out != nullptr, "null argument");
        require(index < scan->rows.size(), "row index out of range");
        *out = scan->rows[index];
    });
}

int sd_scan_monotone(const sd_scan *scan, double slack) {
    if (scan == nullptr) {
        return 0;
    }
    std::map<int, std::vector<std::pair<double, double>>> by_m;
    for (const auto &r : scan->rows) {
        by_m[r.twice_m].emplace_back(r.lambda, r.abs_error);
    }
    for (auto &[m, series] : by_m) {
        std::sort(series.begin(), series.end(),
                  [](const auto &a, const auto &b) { return a.first > b.first; });
        for (std::size_t k = 1; k < series.size(); ++k) {
            if (series[k].second > series[k - 1].second + slack) {
                return 0;
            }
        }
    }
    return 1;
}

sd_status sd_sample(const sd_model *model, const sd_state *state, sd_sample_model kind,
                    size_t count, uint64_t seed, sd_batch **out) {
    if (out == nullptr) {
        return fail(SD_INVALID_ARGUMENT, "null output handle");
    }
    *out = nullptr;
    return guarded([&] {
        require(model != nullptr && state != nullptr, "null argument");
        require(state->state.j() == model->j, "state and model spins differ");
        const spindir::RngConfig rng{seed, "mt19937_64"};
        spindir::SampleBatch batch;
        if (kind == SD_MODEL_LIMIT) {
            batch = spindir::sample_limit(state->state, model->params.t, count, rng,
                                          model->sphere);
        } else if (kind == SD_MODEL_FINITE) {
            batch = spindir::sample_finite_lambda(state->state, model->params, count, rng,
                                                  model->radial, model->sphere);
        } else {
            throw spindir::InvalidArgument("unknown sample model");
        }
        auto estimate = spindir::estimate_spin_direction(batch, seed);
        *out = new sd_batch{std::move(batch), estimate};
    });
}

void sd_batch_destroy(sd_batch *batch) { delete batch; }

size_t sd_batch_size(const sd_batch *batch) {
    return batch == nullptr ? 0 : batch->batch.records.size();
}

sd_status sd_batch_record(const sd_batch *batch, size_t index, sd_record *out) {
    return guarded([&] {
        require(batch != nullptr && out != nullptr, "null argument");
        require(index < batch->batch.records.size(), "record index out of range");
        const auto &r = batch->batch.records[index];
        *out = {r.m ? 1 : 0,        r.m ? r.m->twice() : 0,
                r.radius,           r.direction.theta(),
                r.direction.phi(),  r.density};
    });
}

sd_status sd_batch_summary(const sd_batch *batch, sd_summary *out) {
    return guarded([&] {
        require(batch != nullptr && out != nullptr, "null argument");
        const auto &e = batch->estimate;
        *out = {{e.mean_direction.x(), e.mean_direction.y(), e.mean_direction.z()},
                e.concentration,
                e.direction_standard_error,
                e.concentration_standard_error,
                e.used,
                batch->batch.summary.unassigned,
                batch->batch.normalization_deviation};
    });
}

sd_status sd_batch_shells(const sd_batch *batch, sd_shell_count *out, size_t capacity,
                          size_t *written) {
    return guarded([&] {
        require(batch != nullptr && written != nullptr, "null argument");
        const auto &probs = batch->batch.shell_probability;
        const auto &counts = batch->batch.summary.counts;
        *written = probs.size();
        std::size_t i = 0;
        for (const auto &[m, p] : probs) {
            if (i >= capacity) {
                break;
            }
            const auto it = counts.find(m);
            out[i++] = {m, it == counts.end() ? 0 : it->second, p};
        }
    });
}

} // extern "C"
