#pragma once

#include <compare>
#include <string>

#include "tea/error.hpp"

namespace tea {

enum class BumpLevel { major, minor, patch };

const char* to_string(BumpLevel level);
bool bump_level_from_string(const std::string& text, BumpLevel& out);

// Semantic version triple rendered as "M.m.p". Ordering is lexicographic on
// (major, minor, patch); parse(render(v)) == v for all valid triples.
struct VersionString {
    int major = 0;
    int minor = 0;
    int patch = 0;

    auto operator<=>(const VersionString&) const = default;

    std::string render() const;
    static Result<VersionString> parse(const std::string& text);
};

// Standard semantic increment: the bumped field goes up by one and every
// lower field resets to zero.
VersionString bump(VersionString v, BumpLevel level);

inline VersionString initial_version() { return VersionString{1, 0, 0}; }

}  // namespace tea
