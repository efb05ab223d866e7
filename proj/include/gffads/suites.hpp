#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gffads {

// Malformed run configuration or command parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct CheckRecord {
    std::string name;
    std::string inputs;
    double value = 0.0;
    double reference = 0.0;
    double deviation = 0.0;   // the number judged against tolerance
    double tolerance = 0.0;
    double error_estimate = 0.0;
    bool pass = false;
    double runtime = 0.0;     // seconds; only printed on request
    int criterion = 0;        // acceptance item this record belongs to, 0 for none
};

struct Report {
    std::string suite;
    std::vector<CheckRecord> records;
    double runtime = 0.0;

    bool pass() const;
};

// Everything a suite needs beyond its fixed test inputs. Tolerances are keyed by
// check family ("kernel_conservation", "mc", ...) and default to the pinned
// acceptance values.
struct SuiteConfig {
    std::uint64_t seed = 0;
    int threads = 1;

    // bonus-locality point I(a, b, c) and the interior reference point
    double locality_a = 0.3, locality_b = 1.0, locality_c = 1.4, locality_nu = 0.5;
    double locality_interior_a = 1.2;

    int fock_nodes = 640;
    double fock_kmax = 20.0;

    std::size_t mc_samples = 10'000'000;
    int mc_shards = 64;
    int kernel_pairs = 1000;

    std::map<std::string, double> tolerances;

    double tolerance(const std::string& key) const;
    // throws ConfigError; guard-band violations come out as LightConeProximity
    void validate() const;

    static SuiteConfig fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;
};

std::vector<std::string> suiteNames();

// name in suiteNames(); "all" concatenates the others in their listed order
Report runSuite(const std::string& name, const SuiteConfig& cfg);

// One evaluation of a public operation. Parameters are strings as given on the
// command line; unknown names or keys throw ConfigError.
struct ComputeResult {
    std::string quantity;
    std::map<std::string, std::string> inputs;
    std::complex<double> value;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool has_reference = false;
    std::complex<double> reference;
};

std::vector<std::string> quantityNames();
ComputeResult compute(const std::string& quantity, const std::map<std::string, std::string>& params,
                      const SuiteConfig& cfg = {});

struct ScanAxis {
    std::string param;
    double start = 0.0, stop = 0.0;
    int steps = 0;            // 0 gives an empty table
    bool logarithmic = false;

    // "param:start:stop:steps", optionally ":log"
    static ScanAxis parse(const std::string& text);
    std::vector<double> values() const;
};

std::vector<ComputeResult> scan(const std::string& quantity, const ScanAxis& axis,
                                const std::map<std::string, std::string>& params,
                                const SuiteConfig& cfg = {});

// Output. Doubles in CSV are %.16e (17 significant digits); JSON uses the
// shortest round-trip form. Runtimes appear only with timings = true.
std::string reportJson(const Report& r, bool timings = false);
std::string reportCsv(const Report& r, bool timings = false);
std::string computeJson(const ComputeResult& r);
std::string computeCsv(const std::vector<ComputeResult>& rows, const std::string& axis_param = "");
std::string scanJson(const std::vector<ComputeResult>& rows, const std::string& axis_param);

} // namespace gffads
