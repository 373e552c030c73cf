#include "ulrich3/cache.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ulrich3/common.hpp"

namespace ucli {

namespace fs = std::filesystem;

std::string Cache::hash_key(const std::string& material) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : material) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string Cache::path_for(const std::string& key_material) const {
    return (fs::path(dir_) / (hash_key(key_material) + ".json")).string();
}

std::optional<nlohmann::ordered_json> Cache::get(const std::string& key_material) const {
    const std::string path = path_for(key_material);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    nlohmann::ordered_json j;
    try {
        in >> j;
        if (j.at("key").get<std::string>() != key_material) return std::nullopt;
        return j.at("payload");
    } catch (...) {
        in.close();
        std::error_code ec;
        fs::remove(path, ec); // corrupt entry: drop and recompute
        return std::nullopt;
    }
}

void Cache::put(const std::string& key_material, const nlohmann::ordered_json& payload) const {
    fs::create_directories(dir_);
    nlohmann::ordered_json j;
    j["key"] = key_material;
    j["version"] = u3::kEngineVersion;
    j["stored_at"] = (int64_t)std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    j["payload"] = payload;
    const std::string path = path_for(key_material);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw u3::EngineError("cannot write cache entry " + tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

} // namespace ucli
