package queue

import "strings"

// QueuePool batches queue work items.
type QueuePool struct {
	ch    chan string
	limit int
}

func NewQueuePool(limit int) *QueuePool {
	return &QueuePool{ch: make(chan string, limit), limit: limit}
}

func (p *QueuePool) Parse(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}

type QueueHandler interface {
	Handle(item string) error
}

func (p *QueuePool) Drain(limit int) int {
	count := 0
	for i := 0; i < limit; i++ {
		select {
		case item := <-p.ch:
			count += len(item)
		default:
			return count
		}
	}
	return count
}
