//
// lowrank / suite : batch driver over the checker catalogue
//
// A suite configuration spans (trials, dims, k, p, spectrum, perturbation,
// checker). Every combination with satisfied hypotheses yields one
// BoundReport row; hypothesis violations become skip records carrying the
// named hypothesis. Instance seeds derive from (base seed, trial, checker
// id), so adding a checker never reshuffles the instances of another, and
// trials can run on any number of workers without changing a single output
// byte: rows are gathered per job and stably sorted before writing.
//
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lowrank/checkers.hpp"
#include "lowrank/generate.hpp"
#include "lowrank/report.hpp"
#include "lowrank/schatten.hpp"

namespace lowrank {

// --- configuration -----------------------------------------------------------

struct SpectrumTemplate {
    enum class Kind { flat, gapped, decaying };
    Kind kind = Kind::flat;
    double parameter = 0.0;  // gap ratio or decay rate

    std::string name() const {
        switch (kind) {
            case Kind::flat: return "flat";
            case Kind::gapped: return "gapped(" + format_double(parameter) + ")";
            case Kind::decaying: return "decaying(" + format_double(parameter) + ")";
        }
        return "?";
    }

    // Singular values for an (m, n) instance targeting rank k. `gapped`
    // places a strict gap after position k; `flat` deliberately has none.
    std::vector<double> sigmas(int m, int n, int k) const {
        const int r = std::min(m, n);
        std::vector<double> s(r);
        switch (kind) {
            case Kind::flat:
                for (int j = 0; j < r; ++j) s[j] = 1.0;
                break;
            case Kind::gapped:
                for (int j = 0; j < r; ++j)
                    s[j] = j < k ? parameter * (1.0 + 0.1 * (k - 1 - j)) : std::pow(0.9, j - k);
                break;
            case Kind::decaying:
                for (int j = 0; j < r; ++j) s[j] = std::pow(parameter, j);
                break;
        }
        return s;
    }
};

struct SuiteConfig {
    int schema_version = 1;
    int trials = 25;
    std::uint64_t seed = 42;
    std::vector<std::pair<int, int>> dims;
    std::vector<int> ks;
    std::vector<SchattenIndex> ps;
    std::vector<SpectrumTemplate> spectra;
    std::vector<PerturbationSpec> perturbations;
    std::vector<std::string> checkers;
    double tolerance_kappa = kDefaultToleranceKappa;
};

inline SuiteConfig default_config() {
    SuiteConfig c;
    c.trials = 25;
    c.seed = 42;
    c.dims = {{8, 6}, {12, 9}, {20, 15}};
    c.ks = {1, 2, 3};
    c.ps = {SchattenIndex::integer(1), SchattenIndex::integer(2), SchattenIndex::integer(4),
            SchattenIndex::inf()};
    c.spectra = {{SpectrumTemplate::Kind::flat, 0.0},
                 {SpectrumTemplate::Kind::gapped, 2.0},
                 {SpectrumTemplate::Kind::decaying, 0.5}};
    c.perturbations = {{PerturbationKind::basis_additive, 0.3, 0},
                       {PerturbationKind::matrix_additive, 0.05, 0},
                       {PerturbationKind::column_sample, 4.0, 0}};
    for (const CheckerInfo& info : checker_registry()) c.checkers.push_back(info.id);
    return c;
}

inline void validate_config(const SuiteConfig& c) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("config: field '" + field + "' " + why);
    };
    if (c.schema_version != 1) fail("schema_version", "must be 1");
    if (c.trials < 1) fail("trials", "must be at least 1");
    if (c.dims.empty()) fail("dims", "must not be empty");
    for (auto [m, n] : c.dims)
        if (m < 1 || n < 1) fail("dims", "entries must be positive");
    if (c.ks.empty()) fail("ks", "must not be empty");
    for (int k : c.ks) {
        if (k < 1) fail("ks", "entries must be positive");
        bool fits = false;
        for (auto [m, n] : c.dims) fits = fits || k < std::min(m, n);
        if (!fits) fail("ks", "k=" + std::to_string(k) + " is below min(m,n) for no dims entry");
    }
    if (c.ps.empty()) fail("ps", "must not be empty");
    if (c.spectra.empty()) fail("spectra", "must not be empty");
    for (const SpectrumTemplate& s : c.spectra) {
        if (s.kind == SpectrumTemplate::Kind::gapped && !(s.parameter > 1.0))
            fail("spectra", "gapped needs gap_ratio > 1");
        if (s.kind == SpectrumTemplate::Kind::decaying &&
            !(s.parameter > 0.0 && s.parameter < 1.0))
            fail("spectra", "decaying needs rate in (0,1)");
    }
    for (const PerturbationSpec& p : c.perturbations) {
        if (p.magnitude < 0.0) fail("perturbations", "magnitude must be non-negative");
        if (p.kind == PerturbationKind::column_sample) (void)p.column_count();
    }
    if (c.checkers.empty()) fail("checkers", "must not be empty");
    for (const std::string& id : c.checkers)
        if (!is_known_checker(id)) fail("checkers", "unknown checker '" + id + "'");
    if (!(c.tolerance_kappa > 0.0)) fail("tolerance_kappa", "must be positive");
}

inline SuiteConfig config_from_json(const nlohmann::json& j) {
    SuiteConfig c = default_config();
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("config: field '" + field + "' " + why);
    };
    try {
        if (j.contains("schema_version")) c.schema_version = j.at("schema_version").get<int>();
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("dims")) {
            c.dims.clear();
            for (const auto& d : j.at("dims")) {
                if (!d.is_array() || d.size() != 2) fail("dims", "entries must be [m, n] pairs");
                c.dims.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
            }
        }
        if (j.contains("ks")) c.ks = j.at("ks").get<std::vector<int>>();
        if (j.contains("ps")) {
            c.ps.clear();
            for (const auto& p : j.at("ps")) {
                if (p.is_number_integer()) c.ps.push_back(SchattenIndex::integer(p.get<int>()));
                else c.ps.push_back(SchattenIndex::parse(p.get<std::string>()));
            }
        }
        if (j.contains("spectra")) {
            c.spectra.clear();
            for (const auto& s : j.at("spectra")) {
                const std::string kind = s.at("kind").get<std::string>();
                if (kind == "flat") {
                    c.spectra.push_back({SpectrumTemplate::Kind::flat, 0.0});
                } else if (kind == "gapped") {
                    c.spectra.push_back({SpectrumTemplate::Kind::gapped,
                                         s.at("gap_ratio").get<double>()});
                } else if (kind == "decaying") {
                    c.spectra.push_back({SpectrumTemplate::Kind::decaying,
                                         s.at("rate").get<double>()});
                } else {
                    fail("spectra", "unknown kind '" + kind + "'");
                }
            }
        }
        if (j.contains("perturbations")) {
            c.perturbations.clear();
            for (const auto& p : j.at("perturbations")) {
                PerturbationSpec spec;
                spec.kind = parse_perturbation_kind(p.at("kind").get<std::string>());
                spec.magnitude = p.at("magnitude").get<double>();
                if (p.contains("seed")) spec.seed = p.at("seed").get<std::uint64_t>();
                c.perturbations.push_back(spec);
            }
        }
        if (j.contains("checkers")) c.checkers = j.at("checkers").get<std::vector<std::string>>();
        if (j.contains("tolerance_kappa")) c.tolerance_kappa = j.at("tolerance_kappa").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    validate_config(c);
    return c;
}

inline nlohmann::json config_to_json(const SuiteConfig& c) {
    nlohmann::json j;
    j["schema_version"] = c.schema_version;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["dims"] = nlohmann::json::array();
    for (auto [m, n] : c.dims) j["dims"].push_back({m, n});
    j["ks"] = c.ks;
    j["ps"] = nlohmann::json::array();
    for (const SchattenIndex& p : c.ps) j["ps"].push_back(p.to_string());
    j["spectra"] = nlohmann::json::array();
    for (const SpectrumTemplate& s : c.spectra) {
        nlohmann::json e;
        switch (s.kind) {
            case SpectrumTemplate::Kind::flat: e["kind"] = "flat"; break;
            case SpectrumTemplate::Kind::gapped:
                e["kind"] = "gapped";
                e["gap_ratio"] = s.parameter;
                break;
            case SpectrumTemplate::Kind::decaying:
                e["kind"] = "decaying";
                e["rate"] = s.parameter;
                break;
        }
        j["spectra"].push_back(e);
    }
    j["perturbations"] = nlohmann::json::array();
    for (const PerturbationSpec& p : c.perturbations) {
        nlohmann::json e;
        e["kind"] = to_string(p.kind);
        e["magnitude"] = p.magnitude;
        j["perturbations"].push_back(e);
    }
    j["checkers"] = c.checkers;
    j["tolerance_kappa"] = c.tolerance_kappa;
    return j;
}

inline SuiteConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

// --- results ------------------------------------------------------------------

struct SkipRecord {
    std::string bound_id;
    int m = -1;
    int n = -1;
    int k = -1;
    std::string p;
    std::uint64_t seed = 0;
    std::string reason;
};

struct SuiteSummary {
    long total = 0;
    long passed = 0;
    std::vector<BoundReport> failed;
    std::vector<SkipRecord> skipped;
    double max_violation = 0.0;
};

struct SuiteResult {
    std::vector<BoundReport> reports;
    std::vector<SkipRecord> skips;
    SuiteSummary summary;
};

namespace detail {

// Which perturbation kind a checker consumes; angle checkers consume none.
inline std::optional<PerturbationKind> perturbation_kind_for(const std::string& id) {
    if (id == "thm1" || id == "cor1") return PerturbationKind::basis_additive;
    if (id == "thm2" || id == "cor2") return PerturbationKind::matrix_additive;
    if (id == "thm3/4/5" || id == "thm_lc" || id == "thm_lck")
        return PerturbationKind::column_sample;
    return std::nullopt;
}

inline bool checker_uses_p(const std::string& id) { return id != "cor2"; }

// Projector rank for the angle checkers: k+1 when it stays inside the
// theorem-6 window, else k.
inline int angle_projector_rank(int m, int k) {
    return (k + 1 < m - k) ? k + 1 : k;
}

struct InstanceParams {
    std::string checker;
    int m = 0;
    int n = 0;
    int k = 0;
    SchattenIndex p = SchattenIndex::integer(2);
    SpectrumTemplate spectrum;
    std::optional<PerturbationSpec> perturbation;
    std::uint64_t seed = 0;
    double kappa = kDefaultToleranceKappa;
    int spectrum_index = 0;
    int perturbation_index = -1;
};

// Builds the instance and runs one checker; throws HypothesisError when a
// theorem hypothesis fails for the generated data.
inline BoundReport evaluate_instance(const InstanceParams& ip) {
    const std::uint64_t seed_a = mix_seed(ip.seed, 0xA1);
    const std::uint64_t seed_proj = mix_seed(ip.seed, 0xB2);
    const std::uint64_t seed_pert = mix_seed(ip.seed, 0xC3);

    const DenseMatrix a = matrix_with_spectrum(
        SpectrumSpec{ip.m, ip.n, ip.spectrum.sigmas(ip.m, ip.n, ip.k), seed_a});

    BoundReport rep;
    if (ip.checker == "thm1") {
        const OrthonormalBasis z = haar_basis(ip.m, ip.k, seed_proj);
        const BasisPerturbation bp = perturb_basis(z, ip.perturbation->magnitude, seed_pert);
        rep = check_basis_perturbation(a, z, bp.z_hat, ip.p, ip.kappa);
    } else if (ip.checker == "cor1") {
        const RankKApprox best = truncate(svd(a), ip.k);
        const BasisPerturbation bp = perturb_basis(best.basis, ip.perturbation->magnitude, seed_pert);
        rep = check_dominant_basis_perturbation(a, ip.k, bp.z_hat, ip.p, ip.kappa);
    } else if (ip.checker == "thm2") {
        const DenseMatrix e = perturbation_matrix(ip.m, ip.n, ip.perturbation->magnitude, seed_pert);
        const Projector proj = projector_from_orthonormal(haar_basis(ip.m, ip.k, seed_proj));
        rep = check_matrix_additive(a, e, proj, ip.p, ip.kappa);
    } else if (ip.checker == "cor2") {
        const DenseMatrix e = perturbation_matrix(ip.m, ip.n, ip.perturbation->magnitude, seed_pert);
        rep = check_additive_svd_transfer(a, e, ip.k, ip.kappa);
    } else if (ip.checker == "thm3/4/5") {
        const DenseMatrix sketch = column_sample_rescale(a, ip.perturbation->column_count(), seed_pert);
        const Projector proj = projector_from_orthonormal(haar_basis(ip.m, ip.k, seed_proj));
        rep = check_dimension_change(a, sketch, proj, ip.p, ip.kappa);
    } else if (ip.checker == "thm_lc") {
        const DenseMatrix sketch = column_sample_rescale(a, ip.perturbation->column_count(), seed_pert);
        rep = check_error_matrix(a, sketch, ip.p, ip.kappa);
    } else if (ip.checker == "thm_lck") {
        const DenseMatrix sketch = column_sample_rescale(a, ip.perturbation->column_count(), seed_pert);
        rep = check_error_matrix_rank_k(a, sketch, ip.k, ip.p, ip.kappa);
    } else if (ip.checker == "thm_lau" || ip.checker == "thm_lal1" || ip.checker == "thm_lal2" ||
               ip.checker == "thm6") {
        const int rank_p = angle_projector_rank(ip.m, ip.k);
        const Projector proj =
            projector_from_orthonormal(haar_basis(ip.m, std::min(rank_p, ip.m), seed_proj));
        if (ip.checker == "thm_lau") {
            rep = check_angle_lower(a, ip.k, proj, ip.p, ip.kappa);
        } else if (ip.checker == "thm6") {
            rep = check_combined_theorem6(a, ip.k, proj, ip.p, ip.kappa);
        } else {
            rep = check_angle_upper(a, ip.k, proj, ip.p, ip.kappa);
        }
    } else {
        throw std::invalid_argument("unknown checker '" + ip.checker + "'");
    }

    rep.seed = ip.seed;
    if (rep.k < 0) rep.k = ip.k;
    rep.add_context("spectrum", ip.spectrum_index);
    if (ip.perturbation_index >= 0) rep.add_context("perturbation", ip.perturbation_index);
    return rep;
}

struct JobOutput {
    std::vector<BoundReport> reports;
    std::vector<SkipRecord> skips;
};

// All combinations for one (trial, checker) pair, in a fixed nested order.
inline JobOutput run_job(const SuiteConfig& cfg, int trial, const std::string& checker) {
    JobOutput out;
    const std::uint64_t seed = mix_seed(mix_seed(cfg.seed, static_cast<std::uint64_t>(trial)),
                                        fnv1a64(checker));
    const std::optional<PerturbationKind> wanted_kind = perturbation_kind_for(checker);

    std::vector<int> pert_indices;
    if (wanted_kind) {
        for (int i = 0; i < static_cast<int>(cfg.perturbations.size()); ++i)
            if (cfg.perturbations[i].kind == *wanted_kind) pert_indices.push_back(i);
    } else {
        pert_indices.push_back(-1);
    }

    std::vector<SchattenIndex> ps = cfg.ps;
    if (!checker_uses_p(checker)) ps = {SchattenIndex::integer(2)};

    for (auto [m, n] : cfg.dims) {
        for (int k : cfg.ks) {
            for (int si = 0; si < static_cast<int>(cfg.spectra.size()); ++si) {
                for (int pi : pert_indices) {
                    for (const SchattenIndex& p : ps) {
                        const std::string p_text = checker_uses_p(checker) ? p.to_string() : "";
                        if (k >= std::min(m, n)) {
                            out.skips.push_back(
                                {checker, m, n, k, p_text, seed, "k < min(m,n) required"});
                            continue;
                        }
                        // thm_lal1 is the two-norm statement, thm_lal2 the
                        // Frobenius one; other p have no reading to check.
                        if (checker == "thm_lal1" && !p.is_inf()) {
                            out.skips.push_back(
                                {checker, m, n, k, p_text, seed, "two-norm (p=inf) required"});
                            continue;
                        }
                        if (checker == "thm_lal2" && p != SchattenIndex::integer(2)) {
                            out.skips.push_back(
                                {checker, m, n, k, p_text, seed, "Frobenius (p=2) required"});
                            continue;
                        }

                        InstanceParams ip;
                        ip.checker = checker;
                        ip.m = m;
                        ip.n = n;
                        ip.k = k;
                        ip.p = p;
                        ip.spectrum = cfg.spectra[si];
                        if (pi >= 0) ip.perturbation = cfg.perturbations[pi];
                        ip.seed = seed;
                        ip.kappa = cfg.tolerance_kappa;
                        ip.spectrum_index = si;
                        ip.perturbation_index = pi;
                        try {
                            BoundReport rep = evaluate_instance(ip);
                            if (!checker_uses_p(checker)) rep.p.clear();
                            out.reports.push_back(std::move(rep));
                        } catch (const HypothesisError& e) {
                            out.skips.push_back({checker, m, n, k, p_text, seed, e.hypothesis()});
                        }
                    }
                }
            }
        }
    }
    return out;
}

inline int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LOWRANK_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace detail

inline SuiteResult run_suite(const SuiteConfig& cfg, int workers = 0) {
    validate_config(cfg);

    struct Job {
        int trial;
        std::string checker;
    };
    std::vector<Job> jobs;
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (const std::string& checker : cfg.checkers)
            jobs.push_back({trial, checker});

    std::vector<detail::JobOutput> outputs(jobs.size());
    const int thread_count = std::min<int>(detail::resolve_worker_count(workers),
                                           static_cast<int>(jobs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            try {
                outputs[idx] = detail::run_job(cfg, jobs[idx].trial, jobs[idx].checker);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    if (thread_count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    SuiteResult result;
    for (detail::JobOutput& out : outputs) {
        for (BoundReport& r : out.reports) result.reports.push_back(std::move(r));
        for (SkipRecord& s : out.skips) result.skips.push_back(std::move(s));
    }

    // Job order is already deterministic; the stable sort fixes the
    // published ordering (bound_id, then seed) independent of enumeration.
    std::stable_sort(result.reports.begin(), result.reports.end(),
                     [](const BoundReport& a, const BoundReport& b) {
                         if (a.bound_id != b.bound_id) return a.bound_id < b.bound_id;
                         return a.seed < b.seed;
                     });
    std::stable_sort(result.skips.begin(), result.skips.end(),
                     [](const SkipRecord& a, const SkipRecord& b) {
                         if (a.bound_id != b.bound_id) return a.bound_id < b.bound_id;
                         return a.seed < b.seed;
                     });

    SuiteSummary& sum = result.summary;
    sum.total = static_cast<long>(result.reports.size() + result.skips.size());
    sum.skipped = result.skips;
    for (const BoundReport& r : result.reports) {
        if (r.holds) {
            ++sum.passed;
        } else {
            sum.failed.push_back(r);
        }
        sum.max_violation = std::max(sum.max_violation, std::max(0.0, -r.slack));
    }
    return result;
}

// --- emission -----------------------------------------------------------------

namespace detail {

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

} // namespace detail

inline nlohmann::json summary_to_json(const SuiteSummary& s) {
    nlohmann::json j;
    j["total"] = s.total;
    j["passed"] = s.passed;
    j["failed"] = nlohmann::json::array();
    for (const BoundReport& r : s.failed) {
        nlohmann::json f;
        f["bound_id"] = r.bound_id;
        f["seed"] = r.seed;
        f["context"] = context_to_json(r);
        j["failed"].push_back(f);
    }
    // Skips aggregated by (bound_id, reason); the full records live in
    // skips.csv next to the report.
    std::vector<std::pair<std::pair<std::string, std::string>, long>> counts;
    for (const SkipRecord& rec : s.skipped) {
        bool found = false;
        for (auto& [key, count] : counts)
            if (key.first == rec.bound_id && key.second == rec.reason) {
                ++count;
                found = true;
                break;
            }
        if (!found) counts.push_back({{rec.bound_id, rec.reason}, 1});
    }
    j["skipped"] = nlohmann::json::array();
    for (const auto& [key, count] : counts) {
        nlohmann::json e;
        e["bound_id"] = key.first;
        e["reason"] = key.second;
        e["count"] = count;
        j["skipped"].push_back(e);
    }
    j["skipped_total"] = static_cast<long>(s.skipped.size());
    j["max_violation"] = s.max_violation;
    return j;
}

inline void write_suite_outputs(const SuiteResult& result, const SuiteConfig& cfg,
                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());

    const std::string stamp = detail::timestamp_utc();

    {
        const std::string path = out_dir + "/reports.csv";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << "# generated " << stamp << '\n';
        os << report_csv_header() << '\n';
        for (const BoundReport& r : result.reports) os << report_to_csv_row(r) << '\n';
    }
    {
        const std::string path = out_dir + "/skips.csv";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << "# generated " << stamp << '\n';
        os << "bound_id,m,n,k,p,seed,reason\n";
        for (const SkipRecord& s : result.skips) {
            os << csv_quote(s.bound_id) << ',' << s.m << ',' << s.n << ',' << s.k << ',' << s.p
               << ',' << s.seed << ',' << csv_quote(s.reason) << '\n';
        }
    }
    {
        const std::string path = out_dir + "/reports.jsonl";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        for (const BoundReport& r : result.reports) os << report_to_json(r).dump() << '\n';
    }
    {
        const std::string path = out_dir + "/summary.json";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        nlohmann::json j = summary_to_json(result.summary);
        j["config"] = config_to_json(cfg);
        os << j.dump(2) << '\n';
    }
}

// --- verification of an emitted report ----------------------------------------

// Re-derives every verdict from the lhs/rhs/tolerance columns and
// cross-checks the stored `holds` and `slack`; any mismatch or re-derived
// failure counts as failed. Skip records from a sibling skips.csv are folded
// into the summary when present.
inline SuiteSummary verify_report(const std::string& reports_csv_path) {
    std::ifstream is(reports_csv_path);
    if (!is) throw std::runtime_error("cannot open report " + reports_csv_path);

    std::string line;
    std::getline(is, line);
    if (!line.empty() && line[0] == '#') std::getline(is, line);  // timestamp header

    const std::vector<std::string> header = parse_csv_row(line);
    const std::vector<std::string> expected = parse_csv_row(report_csv_header());
    std::vector<std::string> missing;
    for (const std::string& col : expected)
        if (std::find(header.begin(), header.end(), col) == header.end()) missing.push_back(col);
    if (!missing.empty()) {
        std::string msg = "report schema mismatch; missing columns:";
        for (const std::string& col : missing) msg += " " + col;
        throw std::invalid_argument(msg);
    }

    std::vector<int> index(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        index[i] = static_cast<int>(std::find(header.begin(), header.end(), expected[i]) -
                                    header.begin());

    SuiteSummary sum;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = parse_csv_row(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("report row has " + std::to_string(cells.size()) +
                                        " cells, expected " + std::to_string(header.size()));
        auto cell = [&](int i) -> const std::string& { return cells[index[i]]; };

        BoundReport r;
        r.bound_id = cell(0);
        r.seed = std::stoull(cell(6));
        r.lhs = parse_double(cell(7));
        if (!cell(8).empty()) r.rhs_lower = parse_double(cell(8));
        r.rhs_upper = parse_double(cell(9));
        const double stored_slack = parse_double(cell(10));
        r.tolerance = parse_double(cell(11));
        const bool stored_holds = cell(12) == "true";
        nlohmann::json ctx = nlohmann::json::parse(cell(13));

        double slack = r.rhs_upper - r.lhs;
        if (r.rhs_lower) slack = std::min(slack, r.lhs - *r.rhs_lower);
        bool holds = slack >= -r.tolerance;
        if (ctx.contains("sub_ok")) holds = holds && ctx["sub_ok"].get<double>() == 1.0;

        const bool consistent = holds == stored_holds &&
                                std::abs(slack - stored_slack) <= 1e-12 * std::max(1.0, std::abs(slack));
        ++sum.total;
        if (holds && consistent) {
            ++sum.passed;
        } else {
            r.slack = stored_slack;
            r.holds = stored_holds;
            sum.failed.push_back(r);
        }
        sum.max_violation = std::max(sum.max_violation, std::max(0.0, -slack));
    }

    // Fold in skip records when the sibling file is present.
    const std::filesystem::path skips_path =
        std::filesystem::path(reports_csv_path).parent_path() / "skips.csv";
    if (std::filesystem::exists(skips_path)) {
        std::ifstream sk(skips_path.string());
        std::string sline;
        std::getline(sk, sline);
        if (!sline.empty() && sline[0] == '#') std::getline(sk, sline);  // timestamp then header
        while (std::getline(sk, sline)) {
            if (sline.empty()) continue;
            const std::vector<std::string> cells = parse_csv_row(sline);
            if (cells.size() < 7) throw std::invalid_argument("skips.csv row malformed");
            SkipRecord rec;
            rec.bound_id = cells[0];
            rec.m = cells[1].empty() ? -1 : std::stoi(cells[1]);
            rec.n = cells[2].empty() ? -1 : std::stoi(cells[2]);
            rec.k = cells[3].empty() ? -1 : std::stoi(cells[3]);
            rec.p = cells[4];
            rec.seed = std::stoull(cells[5]);
            rec.reason = cells[6];
            sum.skipped.push_back(rec);
            ++sum.total;
        }
    }
    return sum;
}

// One worked instance for documentation; prints nothing itself, the CLI
// formats the returned report. Seeds are tried in order until one satisfies
// the checker's hypotheses (a sampled sketch can come out rank-deficient),
// so the output is still deterministic.
inline BoundReport demo_instance(const std::string& bound_id) {
    if (!is_known_checker(bound_id))
        throw std::invalid_argument("unknown checker '" + bound_id + "'");
    detail::InstanceParams ip;
    ip.checker = bound_id;
    ip.m = 8;
    ip.n = 6;
    ip.k = 2;
    ip.p = (bound_id == "thm_lal1") ? SchattenIndex::inf() : SchattenIndex::integer(2);
    ip.spectrum = {SpectrumTemplate::Kind::gapped, 2.0};
    if (auto kind = detail::perturbation_kind_for(bound_id)) {
        PerturbationSpec pert;
        pert.kind = *kind;
        pert.magnitude = (*kind == PerturbationKind::column_sample) ? 4.0 : 0.2;
        ip.perturbation = pert;
        ip.perturbation_index = 0;
    }
    for (std::uint64_t attempt = 0;; ++attempt) {
        ip.seed = mix_seed(mix_seed(42, attempt), fnv1a64(bound_id));
        try {
            BoundReport rep = detail::evaluate_instance(ip);
            if (!detail::checker_uses_p(bound_id)) rep.p.clear();
            return rep;
        } catch (const HypothesisError&) {
            if (attempt >= 32) throw;
        }
    }
}

} // namespace lowrank
