#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimforge/corpus.hpp"
#include "claimforge/error.hpp"
#include "claimforge/textproc.hpp"
#include "claimforge/weaklabel.hpp"

namespace claimforge {

// Engine configuration, loaded from a single JSON file. Relative paths are
// resolved against the config file's directory. Every referenced file must
// exist at load time. Optional paths left empty fall back to built-ins
// (rules, abbreviations) or disable the feature (lexicons).
struct EngineConfig {
    std::string dictionary_path;
    std::string rules_path;
    std::string abbreviations_path;
    std::string positive_lexicon_path;
    std::string negative_lexicon_path;
    std::vector<std::string> currency_symbols = default_currency_symbols();
    bool numeric_filter = true;
    bool financial_filter = true;
    Aggregator aggregator = Aggregator::sme;
    unsigned parallelism = 1;
    uint64_t seed = 42;

    static EngineConfig load(const std::string& path) {
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(read_file(path));
        } catch (const DataError& e) {
            throw ConfigError(e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
        }
        if (!obj.is_object()) throw ConfigError(path + ": config must be a JSON object");
        try {
            return load_fields(obj, path);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }

  private:
    static EngineConfig load_fields(const nlohmann::json& obj, const std::string& path) {
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        auto resolve = [&](const char* key) -> std::string {
            if (!obj.contains(key) || obj[key].is_null()) return {};
            if (!obj[key].is_string()) {
                throw ConfigError(path + ": '" + std::string(key) + "' must be a string path");
            }
            std::string p = obj[key].get<std::string>();
            if (p.empty()) return {};
            std::filesystem::path fp(p);
            if (fp.is_relative()) fp = base / fp;
            if (!std::filesystem::exists(fp)) {
                throw ConfigError(path + ": '" + std::string(key) + "' references missing file '" +
                                  fp.string() + "'");
            }
            return fp.string();
        };

        EngineConfig cfg;
        cfg.dictionary_path = resolve("dictionary");
        cfg.rules_path = resolve("rules");
        cfg.abbreviations_path = resolve("abbreviations");
        cfg.positive_lexicon_path = resolve("positive_lexicon");
        cfg.negative_lexicon_path = resolve("negative_lexicon");
        if (obj.contains("currency_symbols")) {
            if (!obj["currency_symbols"].is_array() || obj["currency_symbols"].empty()) {
                throw ConfigError(path + ": 'currency_symbols' must be a non-empty array");
            }
            cfg.currency_symbols.clear();
            for (const auto& s : obj["currency_symbols"]) {
                if (!s.is_string() || s.get<std::string>().empty()) {
                    throw ConfigError(path + ": currency symbols must be non-empty strings");
                }
                cfg.currency_symbols.push_back(s.get<std::string>());
            }
        }
        if (obj.contains("filters")) {
            const auto& f = obj["filters"];
            if (!f.is_object()) throw ConfigError(path + ": 'filters' must be an object");
            cfg.numeric_filter = f.value("numeric", true);
            cfg.financial_filter = f.value("financial", true);
        }
        if (obj.contains("aggregator")) {
            try {
                cfg.aggregator = aggregator_from_string(obj["aggregator"].get<std::string>());
            } catch (const DataError& e) {
                throw ConfigError(path + ": " + e.what());
            }
        }
        if (obj.contains("parallelism")) {
            const long p = obj["parallelism"].get<long>();
            if (p < 1) throw ConfigError(path + ": parallelism must be >= 1");
            cfg.parallelism = static_cast<unsigned>(p);
        }
        if (obj.contains("seed")) cfg.seed = obj["seed"].get<uint64_t>();
        return cfg;
    }
};

}  // namespace claimforge
