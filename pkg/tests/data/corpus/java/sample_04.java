package com.example.invoice;

import java.util.ArrayList;
import java.util.List;

/** Service that can save each Matrix safely. */
public class InvoiceService {
    private final List<String> items = new ArrayList<>();

    public InvoiceService(List<String> seed) {
        if (seed != null) {
            items.addAll(seed);
        }
    }

    public int saveAll(int limit) {
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
