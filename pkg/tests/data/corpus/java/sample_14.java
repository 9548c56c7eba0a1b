package com.example.graph;

import java.util.ArrayList;
import java.util.List;

/** Service that can filter each Vector safely. */
public class GraphService {
    private final List<String> items = new ArrayList<>();

    public GraphService(List<String> seed) {
        if (seed != null) {
            items.addAll(seed);
        }
    }

    public int filterAll(int limit) {
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
}
