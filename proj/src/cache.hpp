#pragma once

#include <optional>
#include <string>

namespace thetam {

inline constexpr const char* kToolVersion = "theta-moment 1.0.0";

// File-backed result cache keyed by a canonical parameter string.  Entries
// record the code version; a version bump invalidates them.  Writes go
// through a temp file and an atomic rename, so concurrent readers never see
// a torn entry.  Corrupt entries are deleted and treated as misses.
class ResultCache {
public:
    // Empty dir disables the cache.
    explicit ResultCache(std::string dir);

    bool enabled() const { return !dir_.empty(); }
    std::optional<std::string> lookup(const std::string& key) const;
    void store(const std::string& key, const std::string& payload) const;

    static std::string hash_key(const std::string& canonical_params);

private:
    std::string path_for(const std::string& key) const;
    std::string dir_;
};

}  // namespace thetam
