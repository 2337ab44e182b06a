#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace kolmo {

/// Minimal CSV builder: '.' decimal, no locale surprises, 17 significant
/// digits so numeric round-trips are bit-stable.
class CsvWriter {
public:
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += cols[i];
        }
        buf_ += '\n';
    }
    CsvWriter& field(const std::string& s) {
        sep();
        buf_ += s;
        return *this;
    }
    CsvWriter& field(const char* s) { return field(std::string(s)); }
    CsvWriter& field(double v) {
        char tmp[40];
        std::snprintf(tmp, sizeof(tmp), "%.17g", v);
        return field(std::string(tmp));
    }
    CsvWriter& field(int v) { return field(std::string(std::to_string(v))); }
    CsvWriter& field(long long v) { return field(std::string(std::to_string(v))); }
    CsvWriter& field(std::uint64_t v) { return field(std::string(std::to_string(v))); }
    void end_row() {
        buf_ += '\n';
        row_open_ = false;
    }
    const std::string& str() const { return buf_; }

private:
    void sep() {
        if (row_open_) buf_ += ',';
        row_open_ = true;
    }
    std::string buf_;
    bool row_open_ = false;
};

} // namespace kolmo
