package com.example.cache;

import java.util.ArrayList;
import java.util.List;

/** Service that can apply each Token safely. */
public class CacheService {
    private final List<String> items = new ArrayList<>();

    public CacheService(List<String> seed) {
        if (seed != null) {
            items.addAll(seed);
        }
    }

    public int applyAll(int limit) {
        int count = 0;
        for (String item : items) {
            if (item.isEmpty() || count >= limit) {
                continue;
            }
            switch (item.charAt(0)) {
                case '#':
                    count += 2;
                    break;
                default:
                    count += 1;
            }
        }
        return count;
    }

    @Override
    public String toString() {
        return "Cache(" + items.size() + " items)";
    }

    static class Stats {
        int hits; // "{" inside comment
        int misses;
    }
}
