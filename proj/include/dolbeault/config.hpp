#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dolbeault/rational.hpp"

namespace dolbeault {

// Flat key/value store parsed from structured text:
//
//   # comment
//   kind = solve
//   [solve]
//   resolutions = 16, 24, 32     # keys inside a table are prefixed "solve."
//   s = "1/2"                    # quotes optional, stripped
//
// Keys are [A-Za-z0-9_.]+; values keep their raw text so the typed getters
// can report the field path on a parse failure.  Later assignments to the
// same key win, which is how command-line overrides are layered on top of a
// file.
struct Config {
    std::map<std::string, std::string> kv;

    static Config parse_text(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    void set(const std::string& key, std::string value) { kv[key] = std::move(value); }

    // Getters with a default; the *_req variants throw on a missing key.
    // Every malformed value throws std::invalid_argument naming the key.
    std::string get_str(const std::string& key, const std::string& dflt) const;
    std::string get_str_req(const std::string& key) const;
    long long get_int(const std::string& key, long long dflt) const;
    unsigned long long get_u64(const std::string& key, unsigned long long dflt) const;
    double get_double(const std::string& key, double dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    rat get_rat(const std::string& key, const rat& dflt) const;
    pexp get_pexp(const std::string& key, const pexp& dflt) const;
    std::vector<long long> get_ints(const std::string& key,
                                    const std::vector<long long>& dflt) const;
    std::vector<rat> get_rats(const std::string& key, const std::vector<rat>& dflt) const;

    // Sorted "key=value" lines; the determinism hash is taken over this.
    std::string canonical() const;
};

std::uint64_t fnv64(std::string_view text);

} // namespace dolbeault
