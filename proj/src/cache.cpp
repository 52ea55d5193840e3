#include "cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace thetam {

ResultCache::ResultCache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
}

std::string ResultCache::hash_key(const std::string& canonical_params) {
    // FNV-1a 64, stable across runs and platforms
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_params) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string ResultCache::path_for(const std::string& key) const {
    return (fs::path(dir_) / (hash_key(key) + ".json")).string();
}

std::optional<std::string> ResultCache::lookup(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::string path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        auto doc = nlohmann::json::parse(ss.str());
        if (doc.at("version").get<std::string>() != kToolVersion ||
            doc.at("key").get<std::string>() != key)
            return std::nullopt;
        return doc.at("payload").get<std::string>();
    } catch (const std::exception&) {
        std::cerr << "warning: deleting corrupt cache entry " << path << "\n";
        std::error_code ec;
        fs::remove(path, ec);
        return std::nullopt;
    }
}

void ResultCache::store(const std::string& key, const std::string& payload) const {
    if (!enabled()) return;
    nlohmann::ordered_json doc;
    doc["version"] = kToolVersion;
    doc["key"] = key;
    doc["payload"] = payload;
    std::string path = path_for(key);
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump(2);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
}

}  // namespace thetam
