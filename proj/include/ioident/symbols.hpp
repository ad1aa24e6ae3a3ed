#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ioident {

// Immutable table of polynomial symbols. By construction the differential
// operator symbol "s" occupies the last slot of every table, so exponent
// vectors always have arity = params + 1 and the term order ranks s last.
class SymbolTable {
  public:
    static std::shared_ptr<const SymbolTable> make(std::vector<std::string> params);

    int arity() const { return static_cast<int>(names_.size()); }
    int s_index() const { return arity() - 1; }
    const std::string& name(int i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    // -1 when absent
    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    bool same_as(const SymbolTable& other) const { return names_ == other.names_; }

  private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

using SymTab = std::shared_ptr<const SymbolTable>;

} // namespace ioident
