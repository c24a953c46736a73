#include "quotapower/io.hpp"

#include "quotapower/balls_bins.hpp"

#include "json.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace quotapower {

namespace {

using ordered_json = nlohmann::ordered_json;

std::int64_t json_int64(const nlohmann::json& v, const char* what) {
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw std::invalid_argument(std::string(what) + " does not fit in 64 bits");
        return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

// CSV field quoting, applied only where a field can hold text.
std::string csv_quote(const std::string& field) {
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string num_str(const BigRat& r) { return boost::multiprecision::numerator(r).str(); }
std::string den_str(const BigRat& r) { return boost::multiprecision::denominator(r).str(); }

}  // namespace

GameDocument read_game_document(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array())
        throw std::invalid_argument("game document must be an object with a \"weights\" array");

    GameDocument out;
    for (const auto& v : doc["weights"]) out.weights.push_back(json_int64(v, "weight"));
    if (doc.contains("quota")) {
        const auto& q = doc["quota"];
        if (!q.is_object() || !q.contains("num") || !q.contains("den"))
            throw std::invalid_argument("quota must be an object {\"num\": ..., \"den\": ...}");
        const std::int64_t num = json_int64(q["num"], "quota num");
        const std::int64_t den = json_int64(q["den"], "quota den");
        if (den == 0) throw std::invalid_argument("quota den must be nonzero");
        out.quota = BigRat(BigInt(num), BigInt(den));
    }
    return out;
}

Game make_game(const GameDocument& doc, const std::optional<BigRat>& override_quota) {
    if (override_quota) return Game(doc.weights, *override_quota);
    if (doc.quota) return Game(doc.weights, *doc.quota);
    throw std::invalid_argument("no quota: the document has none and no --quota was given");
}

std::vector<BigRat> read_rational_lines(std::istream& in) {
    std::vector<BigRat> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        std::string token = line.substr(begin, end - begin + 1);
        if (token[0] == '#') continue;
        try {
            values.push_back(parse_rational(token));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": not a rational or decimal: " + token);
        }
    }
    return values;
}

void write_power_csv(std::ostream& out, const PowerVector& power) {
    out << "agent_index,value_num,value_den,value_float\n";
    for (size_t i = 0; i < power.values.size(); ++i) {
        const BigRat& v = power.values[i];
        out << (i + 1) << ',' << num_str(v) << ',' << den_str(v) << ','
            << format_double17(v) << '\n';
    }
}

void write_sample_json(std::ostream& out, const SampledWeights& sample) {
    ordered_json doc;
    doc["weights"] = sample.sorted;
    doc["m"] = sample.total();
    doc["n"] = sample.sorted.size();
    doc["seed"] = sample.seed;
    out << doc.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
    out << "quota_num,quota_den,agent,phi_num,phi_den,phi_float\n";
    for (size_t k = 0; k < curve.quotas.size(); ++k) {
        const BigRat& q = curve.quotas[k];
        for (size_t a = 0; a < curve.agents.size(); ++a) {
            const BigRat& phi = curve.values[a][k];
            out << num_str(q) << ',' << den_str(q) << ',' << curve.agents[a] << ','
                << num_str(phi) << ',' << den_str(phi) << ',' << format_double17(phi)
                << '\n';
        }
    }
}

void write_breakpoints_csv(std::ostream& out, const SIWeights& w) {
    const int n = w.n();
    if (n > 20) throw std::invalid_argument("breakpoints CSV limited to n <= 20");
    out << "beta,pset,lower_num,lower_den,upper_num,upper_den";
    for (int i = 1; i <= n; ++i) out << ",phi" << i << "_num,phi" << i << "_den";
    out << '\n';
    const std::int64_t top = (std::int64_t{1} << n) - 1;
    for (std::int64_t b = 1; b <= top; ++b) {
        PSet p = pset_from_beta(BigInt(b), n);
        QuotaInterval interval = si_interval(w, p);
        std::string joined;
        for (size_t j = 0; j < p.members.size(); ++j) {
            if (j) joined += ',';
            joined += std::to_string(p.members[j]);
        }
        out << b << ',' << csv_quote(joined) << ',' << num_str(interval.lower) << ','
            << den_str(interval.lower) << ',' << num_str(interval.upper) << ','
            << den_str(interval.upper);
        for (int i = 1; i <= n; ++i) {
            const BigRat phi = pset_formula(p, i);
            out << ',' << num_str(phi) << ',' << den_str(phi);
        }
        out << '\n';
    }
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
    ordered_json doc;
    doc["tag"] = report.tag;
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : report.config) config[key] = value;
    doc["config"] = config;
    ordered_json trials = ordered_json::array();
    for (const auto& t : report.trials) {
        ordered_json rec;
        rec["seed"] = t.seed;
        rec["weights_digest"] = t.weights_digest;
        rec["measured"] = t.measured;
        rec["success"] = t.success;
        rec["note"] = t.note;
        trials.push_back(std::move(rec));
    }
    doc["trials"] = std::move(trials);
    ordered_json agg;
    agg["trial_count"] = report.trial_count;
    agg["mean"] = report.mean;
    agg["stddev"] = report.stddev;
    agg["success_fraction"] = report.success_fraction;
    agg["tolerance_note"] = report.tolerance_note;
    doc["aggregate"] = std::move(agg);
    out << doc.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "trial,seed,weights_digest,measured,success,note\n";
    for (size_t i = 0; i < report.trials.size(); ++i) {
        const TrialRecord& t = report.trials[i];
        std::ostringstream measured;
        measured.precision(17);
        measured << t.measured;
        out << i << ',' << t.seed << ',' << t.weights_digest << ',' << measured.str()
            << ',' << (t.success ? 1 : 0) << ',' << csv_quote(t.note) << '\n';
    }
}

}  // namespace quotapower
