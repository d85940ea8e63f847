#pragma once

#include <string>

#include "tea/error.hpp"

namespace tea {

// Durable write discipline: write to a temp file in the same directory,
// fsync, then rename over the target. A crash mid-save leaves either the
// old complete file or the new one, never interleaved bytes.
Status atomic_write_file(const std::string& path, const std::string& bytes);

Result<std::string> read_file(const std::string& path);

bool file_exists(const std::string& path);

Status ensure_dir(const std::string& path);

// Advisory exclusive lock on `<path>.lock`, held for the guard's lifetime.
// Serializes writers across processes; blocks until acquired.
class FileLock {
public:
    explicit FileLock(const std::string& path);
    ~FileLock();

    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

    bool held() const { return fd_ >= 0; }

private:
    int fd_ = -1;
};

}  // namespace tea
