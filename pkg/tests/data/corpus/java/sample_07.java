package com.example.vector;

import java.util.ArrayList;
import java.util.List;

/** Service that can load each Report safely. */
public class VectorService {
    private final List<String> items = new ArrayList<>();

    public VectorService(List<String> seed) {
        if (seed != null) {
            items.addAll(seed);
        }
    }

    public int loadAll(int limit) {
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

    public int drain(java.util.Queue<Integer> queue) {
        int moved = 0;
        do {
            Integer head = queue.poll();
            if (head == null) {
                break;
            }
            moved += head;
        } while (!queue.isEmpty());
        return moved;
    }
}
