#include "tea/persist.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tea {

namespace fs = std::filesystem;

Status ensure_dir(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec && !fs::is_directory(path)) {
        return make_error(ErrorKind::PersistenceError,
                          "cannot create directory '" + path + "': " + ec.message());
    }
    return ok_status();
}

bool file_exists(const std::string& path) {
    std::error_code ec;
    return fs::exists(path, ec);
}

Status atomic_write_file(const std::string& path, const std::string& bytes) {
    fs::path target(path);
    if (target.has_parent_path()) {
        if (auto st = ensure_dir(target.parent_path().string()); !st.ok()) return st;
    }
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) {
        return make_error(ErrorKind::PersistenceError,
                          "cannot open '" + tmp + "': " + std::strerror(errno));
    }
    const char* data = bytes.data();
    std::size_t left = bytes.size();
    while (left > 0) {
        ssize_t n = ::write(fd, data, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            int err = errno;
            ::close(fd);
            ::unlink(tmp.c_str());
            return make_error(ErrorKind::PersistenceError,
                              "write to '" + tmp + "' failed: " + std::strerror(err));
        }
        data += n;
        left -= std::size_t(n);
    }
    if (::fsync(fd) != 0) {
        int err = errno;
        ::close(fd);
        ::unlink(tmp.c_str());
        return make_error(ErrorKind::PersistenceError,
                          "fsync '" + tmp + "' failed: " + std::strerror(err));
    }
    ::close(fd);
    if (::rename(tmp.c_str(), path.c_str()) != 0) {
        int err = errno;
        ::unlink(tmp.c_str());
        return make_error(ErrorKind::PersistenceError,
                          "rename to '" + path + "' failed: " + std::strerror(err));
    }
    return ok_status();
}

Result<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return make_error(ErrorKind::PersistenceError, "cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

FileLock::FileLock(const std::string& path) {
    std::string lock_path = path + ".lock";
    fd_ = ::open(lock_path.c_str(), O_WRONLY | O_CREAT, 0644);
    if (fd_ >= 0) {
        while (::flock(fd_, LOCK_EX) != 0) {
            if (errno != EINTR) {
                ::close(fd_);
                fd_ = -1;
                break;
            }
        }
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

}  // namespace tea
