#pragma once

#include <random>
#include <string>
#include <vector>

#include "tea/types.hpp"

namespace tea::testsupport {

// Random structured value, depth-bounded, finite numbers only.
inline Value random_value(std::mt19937& rng, int depth = 5) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 4);
    switch (pick(rng)) {
        case 0: return Value(nullptr);
        case 1: return Value(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
        case 2: return Value(std::uniform_int_distribution<long long>(-1'000'000'000'000LL,
                                                                      1'000'000'000'000LL)(rng));
        case 3: {
            double mantissa = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
            int exponent = std::uniform_int_distribution<int>(-12, 12)(rng);
            return Value(mantissa * std::pow(10.0, exponent));
        }
        case 4: {
            static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789 _.-{}\"\\";
            std::uniform_int_distribution<int> len(0, 12);
            std::uniform_int_distribution<int> ch(0, sizeof(alphabet) - 2);
            std::string s;
            int n = len(rng);
            for (int i = 0; i < n; ++i) s.push_back(alphabet[ch(rng)]);
            return Value(s);
        }
        case 5: {
            Value arr = Value::array();
            int n = std::uniform_int_distribution<int>(0, 4)(rng);
            for (int i = 0; i < n; ++i) arr.push_back(random_value(rng, depth - 1));
            return arr;
        }
        default: {
            Value obj = Value::object();
            int n = std::uniform_int_distribution<int>(0, 4)(rng);
            for (int i = 0; i < n; ++i) {
                obj["k" + std::to_string(std::uniform_int_distribution<int>(0, 99)(rng))] =
                    random_value(rng, depth - 1);
            }
            return obj;
        }
    }
}

inline std::string random_name(std::mt19937& rng, const std::string& prefix = "c") {
    return prefix + std::to_string(std::uniform_int_distribution<int>(0, 999999)(rng));
}

inline ComponentConfig make_config(const std::string& name, ComponentKind kind,
                                   const std::string& description, const std::string& source,
                                   VersionString version = initial_version(),
                                   bool evolvable = false) {
    ComponentConfig cfg;
    cfg.descriptor.name = name;
    cfg.descriptor.description = description;
    cfg.descriptor.evolvable = evolvable;
    cfg.version = version;
    cfg.source = source;
    cfg.kind = kind;
    cfg.representations = synthesize_representations(name, description, {}, false);
    return cfg;
}

}  // namespace tea::testsupport
