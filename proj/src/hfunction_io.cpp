#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hinv/hfunction.hpp"

namespace hinv {

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

double parse_number(const std::string& field, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size())
        throw std::invalid_argument("h-table line " + std::to_string(line) + ": bad number '" + field + "'");
    return v;
}

}  // namespace

HFunction parse_h_table_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<double> radii, values;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string compact;
            for (char c : line)
                if (c != ' ') compact += c;
            if (compact != "r,h")
                throw std::invalid_argument("h-table: expected header 'r,h', got '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("h-table line " + std::to_string(lineno) + ": expected two columns");
        radii.push_back(parse_number(trim(line.substr(0, comma)), lineno));
        values.push_back(parse_number(trim(line.substr(comma + 1)), lineno));
    }
    if (!header_seen) throw std::invalid_argument("h-table: empty input");
    return HFunction::tabulated(std::move(radii), std::move(values));
}

HFunction read_h_table_csv(const std::string& path)
{
    return parse_h_table_csv(slurp(path));
}

HFunction parse_step_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("step function JSON: ") + e.what());
    }
    if (!j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument("step function JSON needs 'breakpoints' and 'values'");
    return HFunction::step(j.at("breakpoints").get<std::vector<double>>(),
                           j.at("values").get<std::vector<double>>());
}

HFunction read_step_json(const std::string& path)
{
    return parse_step_json(slurp(path));
}

}  // namespace hinv
