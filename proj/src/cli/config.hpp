#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvwit/fock.hpp"
#include "cvwit/witness.hpp"

namespace cvwit::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "cvwit";
inline constexpr const char* kToolVersion = "0.1.0";

/// Value kinds accepted by config keys.
enum class KeyKind { Number, Integer, String, Complex, Spec, Axis, StringList };

struct KeySpec {
    const char* name;
    KeyKind kind;
    const char* help;
};

/// Every accepted config key, in the order used for echoing.
[[nodiscard]] const std::vector<KeySpec>& config_keys();

/// Validated run configuration. Values are kept as JSON in schema order so the
/// echo is stable; typed access goes through the getters.
class RunConfig {
public:
    RunConfig() = default;

    /// Parses and validates a JSON object; unknown keys and wrongly typed
    /// values raise InvalidArgument.
    static RunConfig from_json(const Json& j);
    static RunConfig from_file(const std::string& path);

    /// Sets a key from its command-line string form, overriding any value.
    void set_from_string(const std::string& key, const std::string& text);
    void set(const std::string& key, const Json& value);
    void erase(const std::string& key);

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] double number(const std::string& key, double fallback) const;
    [[nodiscard]] std::optional<double> number(const std::string& key) const;
    [[nodiscard]] long long integer(const std::string& key, long long fallback) const;
    [[nodiscard]] std::string string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] std::optional<cplx> complex(const std::string& key) const;
    [[nodiscard]] std::optional<MinorSpec> spec() const;
    [[nodiscard]] std::vector<std::string> string_list(const std::string& key) const;
    [[nodiscard]] std::optional<Json> axis(const std::string& key) const;

    /// Keys that shape the result, in config_keys() order; output and threads are left out.
    [[nodiscard]] Json echo() const;

private:
    std::map<std::string, Json> values_;
};

/// "m,n,p,q" -> MinorSpec, validated. Offers the corrected index order when
/// the pattern is invalid but its transpose would be valid.
[[nodiscard]] MinorSpec parse_spec(const std::string& text);

/// "re" or "re,im".
[[nodiscard]] cplx parse_complex(const std::string& text);

/// "param:min:max:steps".
[[nodiscard]] Json parse_axis(const std::string& text);

}  // namespace cvwit::cli
