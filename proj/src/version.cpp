#include "tea/version.hpp"

#include <charconv>
#include <cstdio>

namespace tea {

const char* to_string(BumpLevel level) {
    switch (level) {
        case BumpLevel::major: return "major";
        case BumpLevel::minor: return "minor";
        case BumpLevel::patch: return "patch";
    }
    return "patch";
}

bool bump_level_from_string(const std::string& text, BumpLevel& out) {
    if (text == "major") {
        out = BumpLevel::major;
    } else if (text == "minor") {
        out = BumpLevel::minor;
    } else if (text == "patch") {
        out = BumpLevel::patch;
    } else {
        return false;
    }
    return true;
}

std::string VersionString::render() const {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%d.%d.%d", major, minor, patch);
    return buf;
}

Result<VersionString> VersionString::parse(const std::string& text) {
    const Error bad = make_error(ErrorKind::ValidationFailed, "invalid version string '" + text + "'");
    VersionString v;
    const char* begin = text.data();
    const char* end = begin + text.size();
    int* fields[3] = {&v.major, &v.minor, &v.patch};
    const char* cursor = begin;
    for (int i = 0; i < 3; ++i) {
        if (cursor >= end) return bad;
        // Reject leading '+'/'-' and leading zeros like "01".
        if (*cursor < '0' || *cursor > '9') return bad;
        if (*cursor == '0' && cursor + 1 < end && cursor[1] >= '0' && cursor[1] <= '9') return bad;
        auto [ptr, ec] = std::from_chars(cursor, end, *fields[i]);
        if (ec != std::errc()) return bad;
        cursor = ptr;
        if (i < 2) {
            if (cursor >= end || *cursor != '.') return bad;
            ++cursor;
        }
    }
    if (cursor != end) return bad;
    return v;
}

VersionString bump(VersionString v, BumpLevel level) {
    switch (level) {
        case BumpLevel::major: return VersionString{v.major + 1, 0, 0};
        case BumpLevel::minor: return VersionString{v.major, v.minor + 1, 0};
        case BumpLevel::patch: return VersionString{v.major, v.minor, v.patch + 1};
    }
    return v;
}

}  // namespace tea
