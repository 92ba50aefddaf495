/****************************************************************************
flat INI-style configuration (sections of key = value lines), election
and adversary settings, config digests and small CSV helpers
*****************************************************************************/
#ifndef ACE_CONFIG_HPP_
#define ACE_CONFIG_HPP_

#include "ace/actors.hpp"

#include <sstream>

namespace ace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static std::string trim(const std::string& s) {
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static IniFile parse(const std::string& text) {
        IniFile f;
        std::istringstream in(text);
        std::string line, section;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            if (line.front() == '[' && line.back() == ']') {
                section = trim(line.substr(1, line.size() - 2));
                f.sections[section];
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: line without '=': " + line);
            f.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return f;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        auto s = sections.find(section);
        if (s == sections.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }
};

enum class TallierPolicy : uint8_t {
    honest = 0,
    always_swap_commitment,
    wrong_audit_reveal,
    wrong_aggregate,
    silent,
};

enum class VoterPolicy : uint8_t {
    honest = 0,
    invalid_vote_garbage_proof,
    wrong_opening,
    double_vote_attempt,
};

enum class DesignatedPolicy : uint8_t { honest = 0, wrong_winner, wrong_rtilde };

inline const char* policy_name(TallierPolicy p) {
    switch (p) {
        case TallierPolicy::honest: return "honest";
        case TallierPolicy::always_swap_commitment: return "always_swap_commitment";
        case TallierPolicy::wrong_audit_reveal: return "wrong_audit_reveal";
        case TallierPolicy::wrong_aggregate: return "wrong_aggregate";
        case TallierPolicy::silent: return "silent";
    }
    return "?";
}
inline const char* policy_name(VoterPolicy p) {
    switch (p) {
        case VoterPolicy::honest: return "honest";
        case VoterPolicy::invalid_vote_garbage_proof: return "invalid_vote_garbage_proof";
        case VoterPolicy::wrong_opening: return "wrong_opening";
        case VoterPolicy::double_vote_attempt: return "double_vote_attempt";
    }
    return "?";
}
inline const char* policy_name(DesignatedPolicy p) {
    switch (p) {
        case DesignatedPolicy::honest: return "honest";
        case DesignatedPolicy::wrong_winner: return "wrong_winner";
        case DesignatedPolicy::wrong_rtilde: return "wrong_rtilde";
    }
    return "?";
}

struct ElectionConfig {
    Backend backend = Backend::tiny_test;
    uint32_t n_v = 3;
    uint32_t n_t = 2;
    uint32_t n_choices = 2;
    AuditStrategy strategy = AuditStrategy::fixed(1);
    std::vector<double> weights;  // categorical vote distribution mu over C
    uint64_t seed = 1;
    PhaseSchedule schedule{0, 0, 0, 0};  // zeroed intervals are derived from the sizes
    Bytes domain_tag = to_bytes("ace-v1");
    Bytes election_id = to_bytes("election-1");
};

struct AdversaryConfig {
    std::set<uint32_t> corrupted_talliers;
    TallierPolicy tallier_policy = TallierPolicy::honest;
    std::set<uint32_t> corrupted_voters;
    VoterPolicy voter_policy = VoterPolicy::honest;
    DesignatedPolicy designated_policy = DesignatedPolicy::honest;

    bool any() const {
        return (!corrupted_talliers.empty() && tallier_policy != TallierPolicy::honest) ||
               (!corrupted_voters.empty() && voter_policy != VoterPolicy::honest) ||
               designated_policy != DesignatedPolicy::honest;
    }
};

inline void validate_config(const ElectionConfig& cfg) {
    if (cfg.n_t < 1) throw ConfigError("config: n_t must be at least 1");
    if (cfg.n_choices < 2) throw ConfigError("config: n_choices must be at least 2");
    GroupParams pp = derive_params(cfg.backend, cfg.n_choices, cfg.domain_tag);
    if (Bigint(cfg.n_v) >= pp.q)
        throw ConfigError("config: n_v must stay below the group order q");
    if (!cfg.weights.empty()) {
        if (cfg.weights.size() != cfg.n_choices)
            throw ConfigError("config: weights length must equal n_choices");
        double sum = 0;
        for (double w : cfg.weights) {
            if (w < 0) throw ConfigError("config: negative weight");
            sum += w;
        }
        if (sum < 0.999 || sum > 1.001) throw ConfigError("config: weights must sum to 1");
    }
    if (cfg.strategy.k < 1) throw ConfigError("config: k must be at least 1");
}

// fill in generous phase windows when the config leaves them zeroed
inline PhaseSchedule effective_schedule(const ElectionConfig& cfg) {
    PhaseSchedule s = cfg.schedule;
    if (s.tally_start == 0) {
        uint32_t rounds = cfg.strategy.kind == AuditStrategy::Kind::fixed_k
                              ? cfg.strategy.k + 2
                              : 80;
        s.voting_start = 1;
        s.tally_start = 2 + uint64_t(cfg.n_v) * rounds;
        s.result_start = s.tally_start + 10;
        s.verification_start = s.result_start + 10;
    }
    return s;
}

inline std::string canonical_config_text(const ElectionConfig& cfg, const AdversaryConfig& adv) {
    std::ostringstream out;
    out << "backend=" << (cfg.backend == Backend::production ? "production" : "tiny_test") << "\n"
        << "n_v=" << cfg.n_v << "\nn_t=" << cfg.n_t << "\nn_choices=" << cfg.n_choices << "\n"
        << "strategy=" << (cfg.strategy.kind == AuditStrategy::Kind::fixed_k ? "fixed" : "geometric")
        << "\nk=" << cfg.strategy.k << "\np=" << cfg.strategy.p << "\nseed=" << cfg.seed << "\n";
    out << "weights=";
    for (size_t i = 0; i < cfg.weights.size(); ++i) out << (i ? "," : "") << cfg.weights[i];
    out << "\ntalliers=";
    for (uint32_t j : adv.corrupted_talliers) out << j << ",";
    out << "\ntallier_policy=" << policy_name(adv.tallier_policy) << "\nvoters=";
    for (uint32_t i : adv.corrupted_voters) out << i << ",";
    out << "\nvoter_policy=" << policy_name(adv.voter_policy)
        << "\ndesignated_policy=" << policy_name(adv.designated_policy) << "\n";
    return out.str();
}

inline Bytes config_digest(const ElectionConfig& cfg, const AdversaryConfig& adv) {
    return sha256(to_bytes(canonical_config_text(cfg, adv)));
}

namespace detail {

inline std::set<uint32_t> parse_index_set(const std::string& s) {
    std::set<uint32_t> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = IniFile::trim(item);
        if (!item.empty()) out.insert(static_cast<uint32_t>(std::stoul(item)));
    }
    return out;
}

template <typename Policy>
Policy parse_policy(const std::string& name, std::initializer_list<Policy> all) {
    for (Policy p : all)
        if (name == policy_name(p)) return p;
    throw ConfigError("config: unknown policy " + name);
}

}  // namespace detail

inline std::pair<ElectionConfig, AdversaryConfig> parse_config(const std::string& text) {
    IniFile f = IniFile::parse(text);
    ElectionConfig cfg;
    std::string be = f.get("election", "backend", "tiny_test");
    if (be == "production") cfg.backend = Backend::production;
    else if (be == "tiny_test") cfg.backend = Backend::tiny_test;
    else throw ConfigError("config: unknown backend " + be);
    cfg.n_v = static_cast<uint32_t>(std::stoul(f.get("election", "n_v", "3")));
    cfg.n_t = static_cast<uint32_t>(std::stoul(f.get("election", "n_t", "2")));
    cfg.n_choices = static_cast<uint32_t>(std::stoul(f.get("election", "n_choices", "2")));
    std::string strat = f.get("election", "strategy", "fixed");
    uint32_t k = static_cast<uint32_t>(std::stoul(f.get("election", "k", "1")));
    double p = std::stod(f.get("election", "p", "0.5"));
    if (strat == "fixed") cfg.strategy = AuditStrategy::fixed(k);
    else if (strat == "geometric") cfg.strategy = AuditStrategy::geometric(p);
    else throw ConfigError("config: unknown strategy " + strat);
    cfg.seed = std::stoull(f.get("election", "seed", "1"));
    std::string weights = f.get("election", "weights", "");
    if (!weights.empty()) {
        std::istringstream in(weights);
        std::string item;
        while (std::getline(in, item, ','))
            cfg.weights.push_back(std::stod(IniFile::trim(item)));
    }
    cfg.election_id = to_bytes(f.get("election", "election_id", "election-1"));

    AdversaryConfig adv;
    adv.corrupted_talliers = detail::parse_index_set(f.get("adversary", "talliers", ""));
    adv.tallier_policy = detail::parse_policy(
        f.get("adversary", "tallier_policy", "honest"),
        {TallierPolicy::honest, TallierPolicy::always_swap_commitment,
         TallierPolicy::wrong_audit_reveal, TallierPolicy::wrong_aggregate,
         TallierPolicy::silent});
    adv.corrupted_voters = detail::parse_index_set(f.get("adversary", "voters", ""));
    adv.voter_policy = detail::parse_policy(
        f.get("adversary", "voter_policy", "honest"),
        {VoterPolicy::honest, VoterPolicy::invalid_vote_garbage_proof, VoterPolicy::wrong_opening,
         VoterPolicy::double_vote_attempt});
    adv.designated_policy = detail::parse_policy(
        f.get("adversary", "designated_policy", "honest"),
        {DesignatedPolicy::honest, DesignatedPolicy::wrong_winner, DesignatedPolicy::wrong_rtilde});
    validate_config(cfg);
    return {cfg, adv};
}

// CSV with a header row, comma separated, numeric fields only
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(const std::vector<double>& values) { rows_.push_back(values); }
    std::string str() const {
        std::ostringstream out;
        for (size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
        out << "\n";
        for (const auto& r : rows_) {
            for (size_t i = 0; i < r.size(); ++i) {
                out << (i ? "," : "");
                if (r[i] == static_cast<double>(static_cast<long long>(r[i])))
                    out << static_cast<long long>(r[i]);
                else
                    out << r[i];
            }
            out << "\n";
        }
        return out.str();
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace ace

#endif  // ACE_CONFIG_HPP_
