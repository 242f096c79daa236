#include "oambsm/config.hpp"

#include <cctype>
#include <cmath>

namespace oambsm {

void RunConfig::validate() const {
    if (subspace_m < 1)
        throw std::invalid_argument("config: subspace_m must be >= 1");
    codebook.validate();
    source.validate();
    if (noise_eps < 0.0 || noise_eps > 1.0)
        throw std::invalid_argument("config: noise eps must be in [0,1]");
    if (fire_threshold <= 0.0)
        throw std::invalid_argument("config: fire threshold must be > 0");
    if (verify_unitary &&
        (verify_unitary->rows() != 4 || verify_unitary->cols() != 4))
        throw std::invalid_argument("config: verify.unitary must be 4x4");
}

RunConfig config_from_json(const io::json& j) {
    RunConfig cfg;
    if (j.contains("subspace_m"))
        cfg.subspace_m = j.at("subspace_m").get<int>();
    if (j.contains("codebook")) {
        const io::json& cb = j.at("codebook");
        static const std::array<const char*, 4> kMessages = {"00", "01", "10",
                                                             "11"};
        for (int msg = 0; msg < 4; ++msg) {
            const char* key = kMessages[static_cast<std::size_t>(msg)];
            if (cb.contains(key))
                cfg.codebook.label_for_message[static_cast<std::size_t>(msg)] =
                    bell_label_from_string(cb.at(key).get<std::string>());
        }
    }
    if (j.contains("source") && j.at("source").contains("weights")) {
        cfg.source.weights.clear();
        for (const auto& term : j.at("source").at("weights")) {
            if (term.size() != 3)
                throw std::invalid_argument(
                    "config: source weight terms are [m, re, im]");
            cfg.source.weights.push_back(
                {term.at(0).get<int>(),
                 Complex(term.at(1).get<double>(), term.at(2).get<double>())});
        }
    }
    if (j.contains("noise") && j.at("noise").contains("eps"))
        cfg.noise_eps = j.at("noise").at("eps").get<double>();
    if (j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("thresholds") && j.at("thresholds").contains("fire"))
        cfg.fire_threshold = j.at("thresholds").at("fire").get<double>();
    if (j.contains("verify") && j.at("verify").contains("unitary"))
        cfg.verify_unitary =
            io::complex_matrix_from_json(j.at("verify").at("unitary"));
    if (j.contains("output") && j.at("output").contains("dir"))
        cfg.output_dir = j.at("output").at("dir").get<std::string>();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("config file does not exist: " +
                                    path.string());
    const std::string text = io::read_file(path);
    const std::string ext = path.extension().string();
    io::json j;
    if (ext == ".json")
        j = io::json::parse(text);
    else if (ext == ".toml")
        j = toml_to_json(text);
    else
        throw std::invalid_argument("config must be .json or .toml: " +
                                    path.string());
    return config_from_json(j);
}

namespace {

struct TomlParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit TomlParser(const std::string& t) : text(t) {}

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    char take() { return text[pos++]; }
    bool eof() const { return pos >= text.size(); }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t'))
            ++pos;
    }

    void skip_to_eol() {
        while (!eof() && peek() != '\n')
            ++pos;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        throw std::invalid_argument("toml parse error (line " +
                                    std::to_string(line) + "): " + what);
    }

    std::string parse_basic_string() {
        if (take() != '"')
            fail("expected string");
        std::string out;
        while (!eof()) {
            char c = take();
            if (c == '"')
                return out;
            if (c == '\\') {
                if (eof())
                    fail("unterminated escape");
                char e = take();
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail("unsupported escape");
                }
            } else if (c == '\n') {
                fail("newline in string");
            } else {
                out += c;
            }
        }
        fail("unterminated string");
    }

    std::string parse_key_part() {
        skip_ws();
        if (peek() == '"')
            return parse_basic_string();
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                          peek() == '_' || peek() == '-'))
            out += take();
        if (out.empty())
            fail("expected key");
        return out;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{parse_key_part()};
        skip_ws();
        while (peek() == '.') {
            take();
            parts.push_back(parse_key_part());
            skip_ws();
        }
        return parts;
    }

    io::json parse_value() {
        skip_ws();
        char c = peek();
        if (c == '"')
            return io::json(parse_basic_string());
        if (c == '[') {
            take();
            io::json arr = io::json::array();
            skip_array_space();
            if (peek() == ']') {
                take();
                return arr;
            }
            while (true) {
                arr.push_back(parse_value());
                skip_array_space();
                if (peek() == ',') {
                    take();
                    skip_array_space();
                    if (peek() == ']') { // trailing comma
                        take();
                        return arr;
                    }
                    continue;
                }
                if (peek() == ']') {
                    take();
                    return arr;
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (text.compare(pos, 4, "true") == 0) {
            pos += 4;
            return io::json(true);
        }
        if (text.compare(pos, 5, "false") == 0) {
            pos += 5;
            return io::json(false);
        }
        return parse_number();
    }

    // inside arrays, newlines and comments are whitespace
    void skip_array_space() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos;
            } else if (c == '#') {
                skip_to_eol();
            } else {
                break;
            }
        }
    }

    io::json parse_number() {
        std::size_t start = pos;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                          peek() == '+' || peek() == '-' || peek() == '.' ||
                          peek() == 'e' || peek() == 'E' || peek() == '_'))
            ++pos;
        std::string raw = text.substr(start, pos - start);
        std::erase(raw, '_');
        if (raw.empty())
            fail("expected value");
        try {
            if (raw.find('.') == std::string::npos &&
                raw.find('e') == std::string::npos &&
                raw.find('E') == std::string::npos)
                return io::json(std::stoll(raw));
            return io::json(std::stod(raw));
        } catch (const std::exception&) {
            fail("bad number: " + raw);
        }
    }
};

io::json* descend(io::json& root, const std::vector<std::string>& path,
                  TomlParser& p) {
    io::json* node = &root;
    for (const auto& part : path) {
        if (!node->is_object())
            p.fail("key collision at '" + part + "'");
        node = &(*node)[part];
        if (node->is_null())
            *node = io::json::object();
    }
    return node;
}

} // namespace

io::json toml_to_json(const std::string& text) {
    io::json root = io::json::object();
    io::json* table = &root;
    TomlParser p(text);

    while (!p.eof()) {
        p.skip_ws();
        char c = p.peek();
        if (c == '\0')
            break;
        if (c == '\n' || c == '\r') {
            p.take();
            continue;
        }
        if (c == '#') {
            p.skip_to_eol();
            continue;
        }
        if (c == '[') {
            p.take();
            auto path = p.parse_dotted_key();
            p.skip_ws();
            if (p.peek() != ']')
                p.fail("expected ']'");
            p.take();
            table = descend(root, path, p);
            p.skip_ws();
            if (p.peek() == '#')
                p.skip_to_eol();
            continue;
        }
        auto key_path = p.parse_dotted_key();
        p.skip_ws();
        if (p.peek() != '=')
            p.fail("expected '='");
        p.take();
        io::json value = p.parse_value();
        io::json* node = table;
        for (std::size_t i = 0; i + 1 < key_path.size(); ++i)
            node = descend(*node, {key_path[i]}, p);
        (*node)[key_path.back()] = std::move(value);
        p.skip_ws();
        if (p.peek() == '#')
            p.skip_to_eol();
    }
    return root;
}

} // namespace oambsm
