#ifndef ULRICH3_CACHE_HPP
#define ULRICH3_CACHE_HPP

#include <optional>
#include <string>

#include <json.hpp>

namespace ucli {

// One JSON file per entry under a cache directory. Entries are immutable
// once written (write-temp-then-rename); corrupt files are deleted and
// recomputed; rereads verify the stored key material.
class Cache {
  public:
    explicit Cache(std::string dir) : dir_(std::move(dir)) {}

    const std::string& dir() const { return dir_; }

    std::optional<nlohmann::ordered_json> get(const std::string& key_material) const;
    void put(const std::string& key_material, const nlohmann::ordered_json& payload) const;

    static std::string hash_key(const std::string& material); // FNV-1a, hex

  private:
    std::string path_for(const std::string& key_material) const;
    std::string dir_;
};

} // namespace ucli

#endif
